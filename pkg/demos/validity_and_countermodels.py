"""Validity search over belief models.

The headline implication -- rationality plus common belief of rationality
lands inside the greatest fixpoint of the optimality operator -- is valid,
so the exhaustive search over small models comes back empty-handed.  Drop
the common-belief premise and the search produces a concrete countermodel,
printed in full.
"""
from epigame.beliefs import format_model
from epigame.modal import check_validity, interpret, parse_nu, pretty_nu
from epigame.oracles import fig1_right

game = fig1_right()

valid = parse_nu("rat(gbr) and CB rat(gbr) -> nu X . O(gbr) X")
broken = parse_nu("rat(gbr) -> nu X . O(gbr) X")

for formula in (valid, broken):
    print(pretty_nu(formula))
    report = check_validity(game, formula, max_states=2)
    verdict = "valid" if report.valid else "NOT valid"
    print(f"  {verdict} after {report.models_checked} models")
    model = report.countermodel
    if model is not None:
        failing = model.universe - interpret(model, formula)
        print(f"  fails at {sorted(failing)} of:")
        print("    " + format_model(model).replace("\n", "\n    ").rstrip())
    print()
