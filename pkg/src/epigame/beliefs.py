"""Belief models over a strategic game: states, played strategies, possibility sets.

A belief model attaches to every state, for every player, the strategy that
player uses there and the set of states the player considers possible.
Possibility sets may be empty and need not contain the actual state.  Events
are plain sets of states; ``game_of_event`` projects an event down to the
restriction of strategies actually played somewhere inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .games import Game, Restriction

Event = frozenset[str]


class ModelFormatError(ValueError):
    """A malformed belief-model description. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class BeliefModel:
    game: Game
    states: tuple[str, ...]
    plays: tuple[Mapping[str, str], ...]  # per player: state -> strategy
    possible: tuple[Mapping[str, Event], ...]  # per player: state -> event

    def __post_init__(self):
        if not self.states:
            raise ModelFormatError("state set must be non-empty")
        if len(set(self.states)) != len(self.states):
            raise ModelFormatError("duplicate state name")
        if len(self.plays) != self.game.n or len(self.possible) != self.game.n:
            raise ModelFormatError("need plays and possible maps for every player")
        universe = set(self.states)
        for i in self.game.players:
            for state in self.states:
                if state not in self.plays[i]:
                    raise ModelFormatError(f"player {i + 1} has no strategy at {state}")
                strategy = self.plays[i][state]
                if strategy not in self.game.strategies[i]:
                    raise ModelFormatError(
                        f"unknown strategy {strategy!r} for player {i + 1} at {state}"
                    )
                if state not in self.possible[i]:
                    raise ModelFormatError(f"player {i + 1} has no possibility set at {state}")
                rogue = set(self.possible[i][state]) - universe
                if rogue:
                    raise ModelFormatError(f"unknown state {sorted(rogue)[0]!r}")

    def __hash__(self) -> int:
        # the generated hash chokes on the mapping fields
        return hash(
            (
                self.game,
                self.states,
                tuple(tuple(sorted(m.items())) for m in self.plays),
                tuple(tuple(sorted((s, tuple(sorted(e))) for s, e in m.items())) for m in self.possible),
            )
        )

    def strategy_of(self, player: int, state: str) -> str:
        return self.plays[player][state]

    def possible_at(self, player: int, state: str) -> Event:
        return frozenset(self.possible[player][state])

    @property
    def universe(self) -> Event:
        return frozenset(self.states)

    def ordered_event(self, event: Event) -> tuple[str, ...]:
        return tuple(s for s in self.states if s in event)


def game_of_event(model: BeliefModel, event: Event) -> Restriction:
    """The restriction of strategies played somewhere in the event."""
    sets = tuple(
        frozenset(model.strategy_of(i, state) for state in event)
        for i in model.game.players
    )
    return Restriction(model.game, sets)


def believes(model: BeliefModel, player: int, event: Event) -> Event:
    """States where everything the player considers possible lies in the event."""
    return frozenset(
        state for state in model.states if model.possible_at(player, state) <= event
    )


def everyone_believes(model: BeliefModel, event: Event) -> Event:
    result = model.universe
    for player in model.game.players:
        result &= believes(model, player, event)
    return result


@dataclass(frozen=True)
class CommonBeliefResult:
    event: Event
    chain: tuple[Event, ...]


def common_belief(model: BeliefModel, event: Event) -> CommonBeliefResult:
    """Intersection of all levels of iterated everyone-believes.

    The chain records each level up to (excluding) the first repeated value;
    since levels of a finite model must eventually repeat, intersecting the
    recorded levels already equals the full infinite intersection.  The
    value-repeat stop matters: without transitivity the levels need not
    shrink monotonically and may cycle.
    """
    chain: list[Event] = []
    seen: set[Event] = set()
    level = everyone_believes(model, event)
    while level not in seen:
        seen.add(level)
        chain.append(level)
        level = everyone_believes(model, level)
    result = model.universe
    for entry in chain:
        result &= entry
    return CommonBeliefResult(result, tuple(chain))


def is_truthful(model: BeliefModel) -> bool:
    """Does every player always consider the actual state possible?"""
    return all(
        state in model.possible_at(player, state)
        for player in model.game.players
        for state in model.states
    )


# ---------------------------------------------------------------------------
# Text format


def _parse_pairs(body: str, lineno: int) -> list[tuple[str, str]]:
    pairs = []
    for chunk in body.split():
        name, sep, value = chunk.partition("=")
        if not sep or not name:
            raise ModelFormatError(f"expected 'state=value', got {chunk!r}", lineno)
        pairs.append((name, value))
    return pairs


def parse_model(text: str, game: Game) -> BeliefModel:
    """Parse the line-oriented belief-model format.

    ::

        states: w1 w2
        plays 1: w1=U w2=D
        possible 1: w1={w1,w2} w2={}

    Possibility sets are written without internal spaces.  Raises
    :class:`ModelFormatError` with a line number on malformed input.
    """
    states: tuple[str, ...] | None = None
    plays: dict[int, dict[str, str]] = {}
    possible: dict[int, dict[str, Event]] = {}
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("states:"):
            if states is not None:
                raise ModelFormatError("duplicate states line", lineno)
            states = tuple(line[len("states:") :].split())
            if not states:
                raise ModelFormatError("state set must be non-empty", lineno)
        elif line.startswith("plays") or line.startswith("possible"):
            if states is None:
                raise ModelFormatError("states line must come first", lineno)
            kind = "plays" if line.startswith("plays") else "possible"
            head, sep, body = line.partition(":")
            index_text = head[len(kind) :].strip()
            if not sep or not index_text.isdigit():
                raise ModelFormatError(f"expected '{kind} <i>: ...'", lineno)
            player = int(index_text)
            if not 1 <= player <= game.n:
                raise ModelFormatError(f"player index {player} out of range 1..{game.n}", lineno)
            target = plays if kind == "plays" else possible
            if player in target:
                raise ModelFormatError(f"duplicate {kind} line for player {player}", lineno)
            entries: dict = {}
            for state, value in _parse_pairs(body, lineno):
                if state not in states:
                    raise ModelFormatError(f"unknown state {state!r}", lineno)
                if kind == "plays":
                    entries[state] = value
                else:
                    if not (value.startswith("{") and value.endswith("}")):
                        raise ModelFormatError(f"expected a state set, got {value!r}", lineno)
                    inner = value[1:-1]
                    members = [s for s in inner.split(",") if s] if inner else []
                    entries[state] = frozenset(members)
            target[player] = entries
        else:
            raise ModelFormatError(f"unrecognized line {line!r}", lineno)

    if states is None:
        raise ModelFormatError("missing states line", last_line + 1)
    for player in range(1, game.n + 1):
        if player not in plays:
            raise ModelFormatError(f"missing plays for player {player}", last_line + 1)
        if player not in possible:
            raise ModelFormatError(f"missing possible for player {player}", last_line + 1)
    return BeliefModel(
        game,
        states,
        tuple(plays[i] for i in range(1, game.n + 1)),
        tuple(possible[i] for i in range(1, game.n + 1)),
    )


def format_model(model: BeliefModel) -> str:
    """Serialize a belief model back into the text format."""
    lines = ["states: " + " ".join(model.states)]
    for i in model.game.players:
        pairs = " ".join(f"{s}={model.strategy_of(i, s)}" for s in model.states)
        lines.append(f"plays {i + 1}: {pairs}")
    for i in model.game.players:
        pairs = " ".join(
            "{}={{{}}}".format(s, ",".join(model.ordered_event(model.possible_at(i, s))))
            for s in model.states
        )
        lines.append(f"possible {i + 1}: {pairs}")
    return "\n".join(lines) + "\n"
