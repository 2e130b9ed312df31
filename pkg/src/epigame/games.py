"""Finite strategic games with exact rational payoffs, and their restriction lattice.

A game fixes one finite, ordered strategy set per player and one rational
payoff per player per strategy profile.  A restriction picks a subset of each
player's strategies; restrictions of a game form a complete lattice under
componentwise inclusion, which is what the elimination operators act on.
Players are 0-indexed throughout the Python API; the text format and all
printed output use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping

Profile = tuple[str, ...]


class GameFormatError(ValueError):
    """A malformed game description. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class Game:
    """An n-player strategic game.

    ``strategies[i]`` is player i's ordered strategy tuple; ``payoffs`` maps
    every full profile to one exact rational per player.  Ties between
    payoffs are allowed, so each player's induced preference over profiles is
    a total preorder, not necessarily a linear order.
    """

    strategies: tuple[tuple[str, ...], ...]
    payoffs: Mapping[Profile, tuple[Fraction, ...]]

    def __post_init__(self):
        if len(self.strategies) == 0:
            raise GameFormatError("a game needs at least one player")
        for i, names in enumerate(self.strategies):
            if not names:
                raise GameFormatError(f"player {i + 1} has no strategies")
            if len(set(names)) != len(names):
                raise GameFormatError(f"duplicate strategy name for player {i + 1}")
        expected = set(product(*self.strategies))
        seen = set(self.payoffs)
        if seen != expected:
            missing = sorted(expected - seen)
            extra = sorted(seen - expected)
            if missing:
                raise GameFormatError(f"missing payoff for profile {missing[0]}")
            raise GameFormatError(f"payoff given for unknown profile {extra[0]}")
        for profile, values in self.payoffs.items():
            if len(values) != self.n or not all(isinstance(v, Fraction) for v in values):
                raise GameFormatError(f"profile {profile} needs {self.n} rational payoffs")

    def __hash__(self) -> int:
        # the generated hash chokes on the payoff mapping
        return hash((self.strategies, tuple(sorted(self.payoffs.items()))))

    @property
    def n(self) -> int:
        return len(self.strategies)

    @property
    def players(self) -> range:
        return range(self.n)

    def payoff(self, player: int, profile: Profile) -> Fraction:
        return self.payoffs[profile][player]

    def profiles(self) -> Iterator[Profile]:
        """All strategy profiles, in the order induced by the strategy lists."""
        return product(*self.strategies)

    def full_restriction(self) -> Restriction:
        return Restriction(self, tuple(frozenset(names) for names in self.strategies))

    def restriction(self, *components: Iterable[str]) -> Restriction:
        """Build a restriction from one strategy collection per player."""
        if len(components) != self.n:
            raise ValueError(f"expected {self.n} components, got {len(components)}")
        return Restriction(self, tuple(frozenset(c) for c in components))


def profile_with(profile: Profile, player: int, strategy: str) -> Profile:
    """The profile obtained by replacing one player's component."""
    return profile[:player] + (strategy,) + profile[player + 1 :]


@dataclass(frozen=True)
class Restriction:
    """A componentwise subset of a game's strategy sets.  Components may be empty."""

    game: Game
    sets: tuple[frozenset[str], ...]

    def __post_init__(self):
        if len(self.sets) != self.game.n:
            raise ValueError("restriction must have one component per player")
        for i, chosen in enumerate(self.sets):
            rogue = chosen - set(self.game.strategies[i])
            if rogue:
                raise ValueError(f"unknown strategy {sorted(rogue)[0]!r} for player {i + 1}")

    @classmethod
    def full(cls, game: Game) -> Restriction:
        return game.full_restriction()

    def _check_same_game(self, other: Restriction) -> None:
        if self.game != other.game:
            raise ValueError("restrictions belong to different games")

    def leq(self, other: Restriction) -> bool:
        """Componentwise inclusion: is every component of self inside other's?"""
        self._check_same_game(other)
        return all(a <= b for a, b in zip(self.sets, other.sets))

    def meet(self, other: Restriction) -> Restriction:
        self._check_same_game(other)
        return Restriction(self.game, tuple(a & b for a, b in zip(self.sets, other.sets)))

    def join(self, other: Restriction) -> Restriction:
        self._check_same_game(other)
        return Restriction(self.game, tuple(a | b for a, b in zip(self.sets, other.sets)))

    def is_empty(self) -> bool:
        """True when every component is empty (the lattice bottom)."""
        return all(not c for c in self.sets)

    def has_empty_component(self) -> bool:
        return any(not c for c in self.sets)

    def ordered(self, player: int) -> tuple[str, ...]:
        """One component as a tuple, in the game's strategy order."""
        return tuple(s for s in self.game.strategies[player] if s in self.sets[player])

    def key(self) -> tuple[tuple[str, ...], ...]:
        """A canonical hashable form (used as a dict key; game-relative)."""
        return tuple(self.ordered(i) for i in self.game.players)

    def size(self) -> int:
        return sum(len(c) for c in self.sets)

    def __str__(self) -> str:
        parts = []
        for i in self.game.players:
            names = " ".join(self.ordered(i))
            parts.append(f"{i + 1}: {names if names else '-'}")
        return " / ".join(parts)


def restrictions(game: Game) -> Iterator[Restriction]:
    """Every restriction of the game, in a fixed canonical order.

    Per player, subsets are enumerated by binary counting over the strategy
    order (empty set first); players vary with the last one fastest.
    """
    per_player = []
    for names in game.strategies:
        subsets = []
        for mask in range(1 << len(names)):
            subsets.append(frozenset(s for b, s in enumerate(names) if mask >> b & 1))
        per_player.append(subsets)
    for combo in product(*per_player):
        yield Restriction(game, tuple(combo))


def lattice_size(game: Game) -> int:
    size = 1
    for names in game.strategies:
        size <<= len(names)
    return size


def _parse_rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc
    return value


def parse_game(text: str) -> Game:
    """Parse the line-oriented game format.

    ::

        # comment
        players: 2
        strategies 1: U D
        strategies 2: L R
        payoff U L : 1 1
        payoff U R : 1 0
        ...

    Payoffs are integers or fractions like ``5/2``.  Every profile needs
    exactly one payoff line.  Raises :class:`GameFormatError` with a 1-based
    line number on malformed input.
    """
    n: int | None = None
    strategies: dict[int, tuple[str, ...]] = {}
    payoffs: dict[Profile, tuple[Fraction, ...]] = {}
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("players:"):
            if n is not None:
                raise GameFormatError("duplicate players line", lineno)
            body = line[len("players:") :].strip()
            if not body.isdigit():
                raise GameFormatError(f"bad player count {body!r}", lineno)
            n = int(body)
            if n == 0:
                raise GameFormatError("zero players", lineno)
        elif line.startswith("strategies"):
            if n is None:
                raise GameFormatError("players line must come first", lineno)
            head, sep, body = line.partition(":")
            index_text = head[len("strategies") :].strip()
            if not sep or not index_text.isdigit():
                raise GameFormatError("expected 'strategies <i>: names...'", lineno)
            player = int(index_text)
            if not 1 <= player <= n:
                raise GameFormatError(f"player index {player} out of range 1..{n}", lineno)
            if player in strategies:
                raise GameFormatError(f"duplicate strategies line for player {player}", lineno)
            names = tuple(body.split())
            if not names:
                raise GameFormatError(f"player {player} has no strategies", lineno)
            if len(set(names)) != len(names):
                raise GameFormatError(f"duplicate strategy name for player {player}", lineno)
            strategies[player] = names
        elif line.startswith("payoff"):
            if n is None or len(strategies) != n:
                raise GameFormatError("payoff lines must follow all strategies lines", lineno)
            head, sep, body = line.partition(":")
            if not sep:
                raise GameFormatError("expected 'payoff <profile> : <values>'", lineno)
            profile = tuple(head[len("payoff") :].split())
            if len(profile) != n:
                raise GameFormatError(f"profile needs {n} strategies", lineno)
            for i, s in enumerate(profile):
                if s not in strategies[i + 1]:
                    raise GameFormatError(f"unknown strategy {s!r} for player {i + 1}", lineno)
            if profile in payoffs:
                raise GameFormatError(f"duplicate payoff for profile {profile}", lineno)
            values = body.split()
            if len(values) != n:
                raise GameFormatError(f"expected {n} payoffs", lineno)
            try:
                payoffs[profile] = tuple(_parse_rational(v) for v in values)
            except ValueError as exc:
                raise GameFormatError(str(exc), lineno) from None
        else:
            raise GameFormatError(f"unrecognized line {line!r}", lineno)

    if n is None:
        raise GameFormatError("missing players line", last_line + 1)
    if len(strategies) != n:
        missing = next(i for i in range(1, n + 1) if i not in strategies)
        raise GameFormatError(f"missing strategies for player {missing}", last_line + 1)
    ordered = tuple(strategies[i] for i in range(1, n + 1))
    expected = set(product(*ordered))
    if set(payoffs) != expected:
        profile = sorted(expected - set(payoffs))[0]
        raise GameFormatError(f"missing payoff for profile {profile}", last_line + 1)
    return Game(ordered, payoffs)


def format_game(game: Game) -> str:
    """Serialize a game back into the text format (canonical ordering)."""
    lines = [f"players: {game.n}"]
    for i in game.players:
        lines.append(f"strategies {i + 1}: " + " ".join(game.strategies[i]))
    for profile in game.profiles():
        values = " ".join(str(v) for v in game.payoffs[profile])
        lines.append("payoff " + " ".join(profile) + " : " + values)
    return "\n".join(lines) + "\n"
