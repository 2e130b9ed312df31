"""Strategic games, optimality conditions, elimination operators, belief
models, a modal fixpoint language, and a small proof checker.

The layers, bottom up:

- :mod:`epigame.games` — finite strategic games with exact rational payoffs
  and the lattice of restrictions (per-player strategy subsets).
- :mod:`epigame.conditions` — a first-order language for optimality
  conditions ("this strategy is a best response", "not dominated", ...),
  with syntactic analyses (closed / positive / context-safe).
- :mod:`epigame.operators` — each condition induces an elimination operator
  on restrictions; iterate to a fixpoint, check monotonicity, compare
  operators.
- :mod:`epigame.beliefs` — finite belief models over a game: states, played
  strategies, possibility sets, belief and common belief of events.
- :mod:`epigame.modal` — a modal language with rationality atoms, belief
  modalities, optimality operators and a greatest-fixpoint binder,
  interpreted over belief models.
- :mod:`epigame.proofs` — line-by-line checking of derivations in that
  language, with semantically discharged implication lemmas.
- :mod:`epigame.oracles` — independent brute-force reference implementations
  and model/game generators used to cross-check everything above.
"""

from .beliefs import BeliefModel, common_belief, format_model, parse_model
from .conditions import (
    ConditionRegistry,
    OptimalityModel,
    analyze,
    builtin,
    models,
    parse_lo,
    pretty_lo,
)
from .games import Game, Restriction, format_game, parse_game, restrictions
from .modal import (
    check_validity,
    common_belief_formula,
    interpret,
    interpret_so,
    parse_nu,
    pretty_nu,
)
from .operators import (
    ConditionOperator,
    ContractedOperator,
    TableOperator,
    check_monotone,
    condition_operator,
    format_trace,
    iterate,
    lemma_inclusion_check,
)
from .proofs import check_proof, parse_proof, standard_lemmas

__version__ = "0.1.0"

__all__ = [
    "BeliefModel",
    "ConditionOperator",
    "ConditionRegistry",
    "ContractedOperator",
    "Game",
    "OptimalityModel",
    "Restriction",
    "TableOperator",
    "analyze",
    "builtin",
    "check_monotone",
    "check_proof",
    "check_validity",
    "common_belief",
    "common_belief_formula",
    "condition_operator",
    "format_game",
    "format_model",
    "format_trace",
    "interpret",
    "interpret_so",
    "iterate",
    "lemma_inclusion_check",
    "models",
    "parse_game",
    "parse_lo",
    "parse_model",
    "parse_nu",
    "parse_proof",
    "pretty_lo",
    "pretty_nu",
    "restrictions",
    "standard_lemmas",
]
