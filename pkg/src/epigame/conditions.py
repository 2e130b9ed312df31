"""First-order language of optimality conditions over strategic games.

A condition is a closed formula read from the point of view of one player
(the *owner*, supplied at evaluation time).  Atoms are context membership
``C(t)`` and payoff comparison ``a >= b @ c``, meaning: the owner, keeping
everyone else at profile c, weakly prefers switching to a's own component
over switching to b's.  The constant ``o`` denotes the focus profile under
evaluation.  The surface syntax additionally offers ``or``, ``->``, strict
``>`` and bounded/unbounded universal quantifiers; all of these are expanded
to the negation/conjunction/exists core at parse time.

Three conditions are built in:

* ``lsd`` — the focus is not strictly dominated within the context,
* ``gsd`` — the focus is not strictly dominated by any strategy of the full game,
* ``gbr`` — the focus is a best response, within the context, against the full game.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Mapping

from .games import Game, Profile, Restriction, profile_with

CONSTANT = "o"
_KEYWORDS = {"not", "and", "or", "exists", "forall", "in", "C", CONSTANT}


# ---------------------------------------------------------------------------
# AST (core syntax only: C(t), t >= t @ t, not, and, exists)


@dataclass(frozen=True)
class CtxAtom:
    term: str


@dataclass(frozen=True)
class GeqAtom:
    left: str
    right: str
    ctx: str


@dataclass(frozen=True)
class Neg:
    body: "FormulaO"


@dataclass(frozen=True)
class Conj:
    left: "FormulaO"
    right: "FormulaO"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "FormulaO"


FormulaO = CtxAtom | GeqAtom | Neg | Conj | Exists


class FormulaSyntaxError(ValueError):
    """Syntax error with 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnboundVariableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(r">=|->|[()@.>]|[A-Za-z_][A-Za-z_0-9]*|\S")


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        for match in _TOKEN_RE.finditer(line):
            tokens.append((match.group(), lineno, match.start() + 1))
    lastline = text.count("\n") + 1
    lastcol = len(text.splitlines()[-1]) + 1 if text.splitlines() else 1
    tokens.append(("", lastline, lastcol))  # end marker
    return tokens


class _LoParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        return self.tokens[self.pos][0]

    def error(self, message: str) -> FormulaSyntaxError:
        _, line, col = self.tokens[self.pos]
        return FormulaSyntaxError(message, line, col)

    def advance(self) -> str:
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, token: str) -> None:
        if self.peek() != token:
            raise self.error(f"expected {token!r}")
        self.advance()

    def parse(self) -> FormulaO:
        formula = self.implication()
        if self.peek() != "":
            raise self.error(f"unexpected {self.peek()!r}")
        return formula

    def implication(self) -> FormulaO:
        left = self.disjunction()
        if self.peek() == "->":
            self.advance()
            right = self.implication()
            return Neg(Conj(left, Neg(right)))
        return left

    def disjunction(self) -> FormulaO:
        left = self.conjunction()
        while self.peek() == "or":
            self.advance()
            right = self.conjunction()
            left = Neg(Conj(Neg(left), Neg(right)))
        return left

    def conjunction(self) -> FormulaO:
        left = self.unary()
        while self.peek() == "and":
            self.advance()
            left = Conj(left, self.unary())
        return left

    def unary(self) -> FormulaO:
        tok = self.peek()
        if tok == "not":
            self.advance()
            return Neg(self.unary())
        if tok in ("exists", "forall"):
            return self.quantifier()
        if tok == "(":
            self.advance()
            inner = self.implication()
            self.expect(")")
            return inner
        return self.atom()

    def quantifier(self) -> FormulaO:
        kind = self.advance()
        var = self.peek()
        if not self._is_variable(var):
            raise self.error("expected a variable name")
        self.advance()
        bounded = False
        if self.peek() == "in":
            self.advance()
            self.expect("C")
            bounded = True
        self.expect(".")
        body = self.implication()
        if kind == "exists":
            return Exists(var, Conj(CtxAtom(var), body)) if bounded else Exists(var, body)
        if bounded:
            return Neg(Exists(var, Conj(CtxAtom(var), Neg(body))))
        return Neg(Exists(var, Neg(body)))

    def atom(self) -> FormulaO:
        if self.peek() == "C":
            self.advance()
            self.expect("(")
            term = self.term()
            self.expect(")")
            return CtxAtom(term)
        left = self.term()
        op = self.peek()
        if op not in (">=", ">"):
            raise self.error("expected '>=' or '>'")
        self.advance()
        right = self.term()
        self.expect("@")
        ctx = self.term()
        if op == ">=":
            return GeqAtom(left, right, ctx)
        # "b > a @ c" abbreviates "not (a >= b @ c)"
        return Neg(GeqAtom(right, left, ctx))

    def term(self) -> str:
        tok = self.peek()
        if tok == CONSTANT:
            self.advance()
            return CONSTANT
        if not self._is_variable(tok):
            raise self.error("expected a term (variable or 'o')")
        self.advance()
        return tok

    @staticmethod
    def _is_variable(tok: str) -> bool:
        return bool(re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok)) and tok not in _KEYWORDS


def parse_lo(text: str) -> FormulaO:
    """Parse a condition into the core AST, expanding all abbreviations."""
    return _LoParser(text).parse()


def pretty_lo(formula: FormulaO) -> str:
    """Render core syntax that :func:`parse_lo` reads back to the same AST."""
    if isinstance(formula, CtxAtom):
        return f"C({formula.term})"
    if isinstance(formula, GeqAtom):
        return f"{formula.left} >= {formula.right} @ {formula.ctx}"
    if isinstance(formula, Neg):
        return f"not {pretty_lo(formula.body)}"
    if isinstance(formula, Conj):
        return f"({pretty_lo(formula.left)} and {pretty_lo(formula.right)})"
    # the binder extends maximally right, so it is never printed bare
    return f"(exists {formula.var} . {pretty_lo(formula.body)})"


# ---------------------------------------------------------------------------
# Static analysis


@dataclass(frozen=True)
class ConditionAnalysis:
    closed: bool
    positive: bool
    context_safe: bool


def free_variables(formula: FormulaO) -> frozenset[str]:
    if isinstance(formula, CtxAtom):
        return frozenset({formula.term}) - {CONSTANT}
    if isinstance(formula, GeqAtom):
        return frozenset({formula.left, formula.right, formula.ctx}) - {CONSTANT}
    if isinstance(formula, Neg):
        return free_variables(formula.body)
    if isinstance(formula, Conj):
        return free_variables(formula.left) | free_variables(formula.right)
    return free_variables(formula.body) - {formula.var}


def _all_ctx_positive(formula: FormulaO, negations: int) -> bool:
    if isinstance(formula, CtxAtom):
        return negations % 2 == 0
    if isinstance(formula, GeqAtom):
        return True
    if isinstance(formula, Neg):
        return _all_ctx_positive(formula.body, negations + 1)
    if isinstance(formula, Conj):
        return _all_ctx_positive(formula.left, negations) and _all_ctx_positive(
            formula.right, negations
        )
    return _all_ctx_positive(formula.body, negations)


def _context_safe(formula: FormulaO) -> bool:
    # The focus constant may only be compared, never used to *build* the
    # context: not as the @-subscript of >= and not inside C(.).  Only then
    # does truth depend on the owner's focus component alone, which is what
    # the elimination operators need.
    if isinstance(formula, CtxAtom):
        return formula.term != CONSTANT
    if isinstance(formula, GeqAtom):
        return formula.ctx != CONSTANT
    if isinstance(formula, Neg):
        return _context_safe(formula.body)
    if isinstance(formula, Conj):
        return _context_safe(formula.left) and _context_safe(formula.right)
    return _context_safe(formula.body)


def analyze(formula: FormulaO) -> ConditionAnalysis:
    """Closedness, positivity (context atoms under an even number of
    negations), and context-safety of a condition."""
    return ConditionAnalysis(
        closed=not free_variables(formula),
        positive=_all_ctx_positive(formula, 0),
        context_safe=_context_safe(formula),
    )


# ---------------------------------------------------------------------------
# Semantics


@dataclass(frozen=True)
class OptimalityModel:
    """A game together with a context restriction and a focus profile."""

    game: Game
    context: Restriction
    focus: Profile

    def __post_init__(self):
        if self.context.game != self.game:
            raise ValueError("context restricts a different game")
        if len(self.focus) != self.game.n or any(
            s not in self.game.strategies[i] for i, s in enumerate(self.focus)
        ):
            raise ValueError(f"bad focus profile {self.focus}")


def _resolve(term: str, assignment: Mapping[str, Profile], focus: Profile) -> Profile:
    if term == CONSTANT:
        return focus
    try:
        return assignment[term]
    except KeyError:
        raise UnboundVariableError(f"unbound variable {term!r}") from None


def satisfies(
    model: OptimalityModel,
    owner: int,
    formula: FormulaO,
    assignment: Mapping[str, Profile] | None = None,
) -> bool:
    """Evaluate a condition for ``owner`` under the given variable assignment.

    Quantifiers range over all profiles of the full game; ``C(t)`` asks
    whether every component of t's profile lies in the context.
    """
    game = model.game
    if not 0 <= owner < game.n:
        raise ValueError(f"owner {owner} out of range")
    assignment = dict(assignment or {})

    def run(f: FormulaO, env: dict[str, Profile]) -> bool:
        if isinstance(f, CtxAtom):
            profile = _resolve(f.term, env, model.focus)
            return all(s in model.context.sets[i] for i, s in enumerate(profile))
        if isinstance(f, GeqAtom):
            a = _resolve(f.left, env, model.focus)
            b = _resolve(f.right, env, model.focus)
            c = _resolve(f.ctx, env, model.focus)
            better = game.payoff(owner, profile_with(c, owner, a[owner]))
            worse = game.payoff(owner, profile_with(c, owner, b[owner]))
            return better >= worse
        if isinstance(f, Neg):
            return not run(f.body, env)
        if isinstance(f, Conj):
            return run(f.left, env) and run(f.right, env)
        for candidate in game.profiles():
            if run(f.body, {**env, f.var: candidate}):
                return True
        return False

    return run(formula, assignment)


def models(model: OptimalityModel, owner: int, formula: FormulaO) -> bool:
    """Evaluate a closed condition (no assignment needed)."""
    return satisfies(model, owner, formula, {})


# ---------------------------------------------------------------------------
# Builtin conditions and registries

BUILTIN_CONDITION_TEXT: dict[str, str] = {
    "lsd": "forall y in C . exists z in C . o >= y @ z",
    "gsd": "forall y . exists z in C . o >= y @ z",
    "gbr": "exists z in C . forall y . o >= y @ z",
}


@lru_cache(maxsize=None)
def builtin(name: str) -> FormulaO:
    try:
        return parse_lo(BUILTIN_CONDITION_TEXT[name])
    except KeyError:
        raise KeyError(f"unknown builtin condition {name!r}") from None


@dataclass(frozen=True)
class ConditionInfo:
    name: str
    formula: FormulaO
    analysis: ConditionAnalysis


class ConditionRegistry:
    """Named conditions usable from the modal layer and proof scripts."""

    def __init__(self) -> None:
        self._entries: dict[str, ConditionInfo] = {}

    def register(self, name: str, formula: FormulaO) -> ConditionInfo:
        if name in self._entries:
            raise ValueError(f"condition {name!r} already registered")
        info = ConditionInfo(name, formula, analyze(formula))
        if not info.analysis.closed:
            raise ValueError(f"condition {name!r} is not closed")
        self._entries[name] = info
        return info

    def get(self, name: str) -> ConditionInfo:
        try:
            return self._entries[name]
        except KeyError:
            raise KeyError(f"unknown condition {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def names(self) -> tuple[str, ...]:
        return tuple(self._entries)

    @classmethod
    def standard(cls) -> "ConditionRegistry":
        registry = cls()
        for name in BUILTIN_CONDITION_TEXT:
            registry.register(name, builtin(name))
        return registry


def parse_condition_file(text: str) -> dict[str, FormulaO]:
    """Parse ``condition <name>: <formula>`` lines (# starts a comment)."""
    found: dict[str, FormulaO] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("condition"):
            raise FormulaSyntaxError("expected 'condition <name>: <formula>'", lineno, 1)
        head, sep, body = line.partition(":")
        name = head[len("condition") :].strip()
        if not sep or not name.isidentifier():
            raise FormulaSyntaxError("expected 'condition <name>: <formula>'", lineno, 1)
        if name in found:
            raise FormulaSyntaxError(f"duplicate condition {name!r}", lineno, 1)
        try:
            found[name] = parse_lo(body)
        except FormulaSyntaxError as exc:
            message = str(exc).split(": ", 1)[1]
            raise FormulaSyntaxError(message, lineno, raw.find(":") + 1 + exc.column) from None
    return found
