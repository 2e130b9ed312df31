"""The proof kernel at work.

Checks the two bundled scripts, then shows the two ways a script can be
rejected: a corrupted justification fails at a specific line with a
reason, and registering a false implication lemma is refused with a
concrete counterexample model.
"""
from epigame.conditions import ConditionRegistry
from epigame.modal import pretty_nu
from epigame.oracles import bundled_games, bundled_proof
from epigame.proofs import (
    LemmaRefused,
    LemmaRegistry,
    check_proof,
    parse_proof,
    standard_lemmas,
)

lemmas = standard_lemmas()

for name in ("THM-MAIN", "THM-IMP"):
    script = parse_proof(bundled_proof(name))
    report = check_proof(script, lemmas=lemmas)
    assert report.ok
    print(f"{name}: OK, proves  {pretty_nu(report.theorem)}")

print()
corrupted = bundled_proof("THM-MAIN").replace("; mp 2 4", "; mp 1 4", 1)
report = check_proof(parse_proof(corrupted), lemmas=lemmas)
print(f"corrupted script: line {report.failure.line}: {report.failure.reason}")

print()
print("registering 'local undominatedness implies global undominatedness':")
try:
    LemmaRegistry().register(
        "lsd_implies_gsd", "lsd", "gsd",
        ConditionRegistry.standard(), list(bundled_games()),
    )
except LemmaRefused as refusal:
    witness = refusal.witness
    print(f"  refused: {refusal}")
    print(f"  witness: context {witness.context}, profile {witness.focus}, "
          f"player {witness.owner + 1}")
