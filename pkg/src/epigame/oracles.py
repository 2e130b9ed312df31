"""Independent oracles and test corpora.

The functions here deliberately re-implement elimination and common belief
with plain loops, without the operator or formula machinery, so that a
disagreement in a cross-check localizes the bug.  The module also bundles
the three reference games, generates a deterministic corpus of small games,
and enumerates or samples belief models for validity sweeps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product
from typing import Iterator, Sequence

from .beliefs import BeliefModel, Event
from .games import Game, Profile, Restriction, parse_game, restrictions

GENERATED_SEED = 7120394
MAX_ENUM_STATES = 3


def _load_bundled(name: str) -> Game:
    text = resources.files("epigame").joinpath("data", name).read_text()
    return parse_game(text)


_BUNDLED: dict[str, Game] = {}


def bundled_game(name: str) -> Game:
    if name not in _BUNDLED:
        _BUNDLED[name] = _load_bundled(f"{name}.game")
    return _BUNDLED[name]


def fig1_left() -> Game:
    """Two-player coordination: matching on either name pays 1, else 0."""
    return bundled_game("fig1_left")


def fig1_right() -> Game:
    """The row player's U strictly dominates D; the column player then
    prefers L once D is gone."""
    return bundled_game("fig1_right")


def fig2() -> Game:
    """3x2 game separating best response from strict dominance: the row M is
    a best response only against R, and D is never a best response yet is
    not strictly dominated."""
    return bundled_game("fig2")


def bundled_games() -> tuple[Game, ...]:
    return (fig1_left(), fig1_right(), fig2())


def bundled_proof(name: str) -> str:
    """The text of a packaged proof script, e.g. ``THM-MAIN``."""
    return resources.files("epigame").joinpath("data", f"{name}.prf").read_text()


def generated_games(seed: int = GENERATED_SEED) -> tuple[Game, ...]:
    """A deterministic sample of small games with integer payoffs in 0..3."""
    rng = random.Random(seed)
    shapes = [(2, 2), (2, 2), (2, 3), (3, 2), (3, 3), (2, 2), (3, 3), (2, 3), (3, 3), (2, 2)]
    names = ("a", "b", "c")
    games = []
    for rows, cols in shapes:
        strategies = (
            tuple(f"{names[0]}{k + 1}" for k in range(rows)),
            tuple(f"{names[1]}{k + 1}" for k in range(cols)),
        )
        payoffs = {
            profile: (Fraction(rng.randint(0, 3)), Fraction(rng.randint(0, 3)))
            for profile in product(*strategies)
        }
        games.append(Game(strategies, payoffs))
    return tuple(games)


def generated_conditions(seed: int = GENERATED_SEED, count: int = 12):
    """A deterministic corpus of closed, context-safe conditions of varied
    shapes, some positive and some not, for operator property tests."""
    from .conditions import Conj, CtxAtom, Exists, GeqAtom, Neg, analyze

    rng = random.Random(seed)
    fresh = iter(f"v{k}" for k in range(10_000))

    def build(depth: int, scope: tuple[str, ...]):
        if depth == 0 or (scope and rng.random() < 0.3):
            terms = scope + ("o",)
            if scope and rng.random() < 0.4:
                return CtxAtom(rng.choice(scope))
            ctx = rng.choice(scope) if scope else None
            if ctx is None:
                var = next(fresh)
                return Exists(var, GeqAtom(rng.choice(terms + (var,)), rng.choice(terms + (var,)), var))
            return GeqAtom(rng.choice(terms), rng.choice(terms), ctx)
        roll = rng.random()
        if roll < 0.3:
            var = next(fresh)
            return Exists(var, build(depth - 1, scope + (var,)))
        if roll < 0.55:
            return Neg(build(depth - 1, scope))
        return Conj(build(depth - 1, scope), build(depth - 1, scope))

    found = []
    while len(found) < count:
        formula = Exists("x0", build(3, ("x0",)))
        report = analyze(formula)
        if report.closed and report.context_safe:
            found.append(formula)
    return tuple(found)


def square_lattice_game() -> Game:
    """A two-player game with one strategy each.  Its restriction lattice is
    the four-element Boolean square, small enough to enumerate every table
    operator on it."""
    return Game((("a",), ("b",)), {("a", "b"): (Fraction(0), Fraction(0))})


def premise_pairs(game: Game, count: int, seed: int = 0) -> Iterator[tuple]:
    """Seeded random table-operator pairs satisfying the outcome-inclusion
    premises: the first is monotone by construction and pointwise below the
    second.

    Building up the lattice by restriction size, each first image is a random
    superset of the join of the images of the immediate predecessors (which
    forces monotonicity), and each second image is a random superset of the
    first.
    """
    from .operators import TableOperator

    rng = random.Random(seed)
    lattice = sorted(restrictions(game), key=lambda r: r.size())
    preds: dict[object, list[Restriction]] = {}
    for r in lattice:
        below = []
        for player in game.players:
            for gone in r.sets[player]:
                smaller = list(r.sets)
                smaller[player] = r.sets[player] - {gone}
                below.append(Restriction(game, tuple(smaller)))
        preds[r.key()] = below

    def grow(rng: random.Random, floor: Restriction) -> Restriction:
        sets = tuple(
            floor.sets[i]
            | frozenset(s for s in game.strategies[i] if rng.random() < 0.5)
            for i in game.players
        )
        return Restriction(game, sets)

    bottom = Restriction(game, tuple(frozenset() for _ in game.players))
    for _ in range(count):
        first: dict[object, Restriction] = {}
        second: dict[object, Restriction] = {}
        for r in lattice:
            floor = bottom
            for p in preds[r.key()]:
                floor = floor.join(first[p.key()])
            first[r.key()] = grow(rng, floor)
            second[r.key()] = grow(rng, first[r.key()])
        yield TableOperator(game, first), TableOperator(game, second)


@dataclass(frozen=True)
class Corpus:
    games: tuple[Game, ...]
    max_states: int
    max_samples: int
    seed: int


def standard_corpus() -> Corpus:
    return Corpus(
        games=bundled_games() + generated_games(),
        max_states=2,
        max_samples=10_000,
        seed=GENERATED_SEED,
    )


# ---------------------------------------------------------------------------
# Naive elimination (independent of the operators and formula modules)


def _not_locally_dominated(game: Game, player: int, strategy: str, ctx: list[list[str]]) -> bool:
    # for every rival choice available in the context there is a context
    # profile against which sticking with `strategy` is no worse
    ctx_profiles = list(product(*ctx))
    for alternative in ctx[player]:
        beaten_everywhere = True
        for z in ctx_profiles:
            mine = game.payoff(player, z[:player] + (strategy,) + z[player + 1 :])
            theirs = game.payoff(player, z[:player] + (alternative,) + z[player + 1 :])
            if mine >= theirs:
                beaten_everywhere = False
                break
        if beaten_everywhere and ctx_profiles:
            return False
    return True


def _not_globally_dominated(game: Game, player: int, strategy: str, ctx: list[list[str]]) -> bool:
    ctx_profiles = list(product(*ctx))
    for alternative in game.strategies[player]:
        survives = False
        for z in ctx_profiles:
            mine = game.payoff(player, z[:player] + (strategy,) + z[player + 1 :])
            theirs = game.payoff(player, z[:player] + (alternative,) + z[player + 1 :])
            if mine >= theirs:
                survives = True
                break
        if not survives:
            return False
    return True


def _is_best_response(game: Game, player: int, strategy: str, ctx: list[list[str]]) -> bool:
    for z in product(*ctx):
        best = True
        for alternative in game.strategies[player]:
            mine = game.payoff(player, z[:player] + (strategy,) + z[player + 1 :])
            theirs = game.payoff(player, z[:player] + (alternative,) + z[player + 1 :])
            if mine < theirs:
                best = False
                break
        if best:
            return True
    return False


_NAIVE_CHECKS = {
    "lsd": _not_locally_dominated,
    "gsd": _not_globally_dominated,
    "gbr": _is_best_response,
}


def naive_eliminate(game: Game, condition: str, rounds: int | None = None) -> Restriction:
    """Textbook simultaneous elimination for the builtin conditions.

    Each round keeps, per player, the strategies passing the check against
    the current context.  Any ``rounds >= total strategy count`` reaches the
    stable outcome; that is the default.
    """
    try:
        check = _NAIVE_CHECKS[condition]
    except KeyError:
        raise ValueError(f"naive elimination only knows {sorted(_NAIVE_CHECKS)}") from None
    if rounds is None:
        rounds = sum(len(names) for names in game.strategies)
    ctx = [list(names) for names in game.strategies]
    for _ in range(rounds):
        ctx = [
            [s for s in ctx[i] if check(game, i, s, ctx)]
            for i in game.players
        ]
    return Restriction(game, tuple(frozenset(c) for c in ctx))


def naive_common_belief(model: BeliefModel, event: Event) -> Event:
    """Common belief by brute force: intersect enough iterated levels that
    the level sequence must already have repeated."""

    def everyone(e: Event) -> Event:
        return frozenset(
            state
            for state in model.states
            if all(model.possible_at(i, state) <= e for i in model.game.players)
        )

    result = model.universe
    level = event
    for _ in range((1 << len(model.states)) + 2):
        level = everyone(level)
        result &= level
    return result


# ---------------------------------------------------------------------------
# Belief-model enumeration and sampling


def _subsets(states: Sequence[str]) -> list[Event]:
    return [
        frozenset(s for b, s in enumerate(states) if mask >> b & 1)
        for mask in range(1 << len(states))
    ]


def enumerate_belief_models(game: Game, max_states: int) -> Iterator[BeliefModel]:
    """Every belief model over the game with 1..max_states states, in a
    fixed order, without duplicates."""
    if max_states > MAX_ENUM_STATES:
        raise ValueError(f"exhaustive enumeration is limited to {MAX_ENUM_STATES} states")
    for count in range(1, max_states + 1):
        states = tuple(f"w{k + 1}" for k in range(count))
        subsets = _subsets(states)
        play_choices = [list(product(game.strategies[i], repeat=count)) for i in game.players]
        poss_choices = list(product(subsets, repeat=count))
        for plays_combo in product(*play_choices):
            plays = tuple(dict(zip(states, chosen)) for chosen in plays_combo)
            for poss_combo in product(poss_choices, repeat=game.n):
                possible = tuple(dict(zip(states, chosen)) for chosen in poss_combo)
                yield BeliefModel(game, states, plays, possible)


def sample_belief_models(
    game: Game, count: int, max_states: int, seed: int = 0
) -> Iterator[BeliefModel]:
    """Seeded random models: uniform state count in 1..max_states, uniform
    strategies, and each possibility set drawn uniformly."""
    rng = random.Random(seed)
    for _ in range(count):
        size = rng.randint(1, max_states)
        states = tuple(f"w{k + 1}" for k in range(size))
        plays = tuple(
            {state: rng.choice(game.strategies[i]) for state in states}
            for i in game.players
        )
        possible = tuple(
            {
                state: frozenset(s for s in states if rng.random() < 0.5)
                for state in states
            }
            for i in game.players
        )
        yield BeliefModel(game, states, plays, possible)


def enumerate_optimality_models(game: Game) -> Iterator[tuple[Restriction, Profile]]:
    """Every (context, focus) pair of the game, in enumeration order."""
    for context in restrictions(game):
        for focus in game.profiles():
            yield context, focus
