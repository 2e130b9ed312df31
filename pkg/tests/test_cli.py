import json
import subprocess
import sys

import pytest

from epigame.beliefs import parse_model
from epigame.cli import main
from epigame.games import parse_game
from epigame.modal import interpret, parse_nu
from epigame.oracles import bundled_proof

GAME = """\
players: 2
strategies 1: U D
strategies 2: L R
payoff U L : 1 1
payoff U R : 1 0
payoff D L : 0 0
payoff D R : 0 1
"""

MODEL = """\
states: w
plays 1: w=D
plays 2: w=L
possible 1: w={w}
possible 2: w={w}
"""

CONDITIONS = """\
condition weak: forall y in C . exists z in C . o >= y @ z
condition strict: exists z in C . forall y . o >= y @ z
"""


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [
        ("game.game", GAME),
        ("model.model", MODEL),
        ("conditions.txt", CONDITIONS),
        ("THM-MAIN.prf", bundled_proof("THM-MAIN")),
        ("THM-IMP.prf", bundled_proof("THM-IMP")),
    ]:
        target = tmp_path / name
        target.write_text(text)
        paths[name] = str(target)
    return paths


def test_eliminate(files, capsys):
    assert main(["eliminate", files["game.game"], "lsd"]) == 0
    assert capsys.readouterr().out == "1: U / 2: L\n"


def test_eliminate_trace(files, capsys):
    assert main(["eliminate", files["game.game"], "lsd", "--trace"]) == 0
    assert capsys.readouterr().out == (
        "stage 0: {1: U D; 2: L R}\n"
        "stage 1: {1: U; 2: L R}\n"
        "stage 2: {1: U; 2: L}\n"
        "stage 3: {1: U; 2: L}\n"
        "closure_ordinal: 2\n"
        "1: U / 2: L\n"
    )


def test_eliminate_json(files, capsys):
    assert main(["eliminate", files["game.game"], "lsd", "--json", "--trace"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["survivors"] == {"1": ["U"], "2": ["L"]}
    assert payload["closure_ordinal"] == 2
    assert len(payload["stages"]) == 4
    assert payload["stages"][0] == {"1": ["U", "D"], "2": ["L", "R"]}


def test_eliminate_with_condition_file(files, capsys):
    assert main(["eliminate", files["game.game"], files["conditions.txt"], "--name", "weak"]) == 0
    assert capsys.readouterr().out == "1: U / 2: L\n"

    assert main(["eliminate", files["game.game"], files["conditions.txt"]]) == 2
    assert "pick one with --name" in capsys.readouterr().err

    assert main(["eliminate", files["game.game"], files["conditions.txt"], "--name", "nope"]) == 2
    assert "does not define condition 'nope'" in capsys.readouterr().err


def test_evaluate(files, capsys):
    assert main(["evaluate", files["model.model"], files["game.game"], "rat(lsd, 1)"]) == 0
    assert capsys.readouterr().out == "w\n"
    assert main(["evaluate", files["model.model"], files["game.game"], "rat(gsd, 1)"]) == 0
    assert capsys.readouterr().out == "\n"


def test_evaluate_json(files, capsys):
    assert main(["evaluate", files["model.model"], files["game.game"], "rat(lsd, 1)", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"states": ["w"]}


def test_evaluate_second_order_formula(files, capsys):
    code = main(["evaluate", files["model.model"], files["game.game"], "forall X . X"])
    assert code == 0
    assert capsys.readouterr().out == "\n"


def test_evaluate_with_registered_conditions(files, capsys):
    code = main(
        [
            "evaluate",
            files["model.model"],
            files["game.game"],
            "rat(weak, 1)",
            "--conditions",
            files["conditions.txt"],
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "w\n"


def test_evaluate_model_game_mismatch(files, tmp_path, capsys):
    other = tmp_path / "other.model"
    other.write_text(MODEL.replace("w=D", "w=Q"))
    assert main(["evaluate", str(other), files["game.game"], "rat(lsd, 1)"]) == 2
    assert "unknown strategy 'Q'" in capsys.readouterr().err


def test_check_valid_verdicts(files, capsys):
    code = main(["check-valid", files["game.game"], "rat(gbr) -> rat(lsd)", "--exhaustive", "1"])
    assert code == 0
    assert capsys.readouterr().out == "VALID-ON-CORPUS\n"

    code = main(["check-valid", files["game.game"], "rat(gbr)", "--exhaustive", "1"])
    assert code == 1
    out = capsys.readouterr().out
    assert out.startswith("countermodel:\n")
    # the printed countermodel really falsifies the formula
    model = parse_model(out[len("countermodel:\n") :], parse_game(GAME))
    assert interpret(model, parse_nu("rat(gbr)")) != model.universe


def test_check_valid_random_mode(files, capsys):
    code = main(
        ["check-valid", files["game.game"], "rat(gbr) -> rat(lsd)", "--random", "40", "2", "--seed", "5"]
    )
    assert code == 0
    assert capsys.readouterr().out == "VALID-ON-CORPUS\n"


def test_check_valid_json(files, capsys):
    code = main(["check-valid", files["game.game"], "rat(gbr)", "--exhaustive", "1", "--json"])
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["valid"] is False
    assert payload["models_checked"] == 1
    assert payload["countermodel"].startswith("states:")


def test_check_valid_needs_a_search_mode(files):
    with pytest.raises(SystemExit) as exc:
        main(["check-valid", files["game.game"], "rat(gbr)"])
    assert exc.value.code == 2


def test_check_proof(files, capsys):
    assert main(["check-proof", files["THM-MAIN.prf"]]) == 0
    assert capsys.readouterr().out == "OK\n"
    assert main(["check-proof", files["THM-IMP.prf"]]) == 0
    assert capsys.readouterr().out == "OK\n"


def test_check_proof_failure(files, tmp_path, capsys):
    broken = tmp_path / "broken.prf"
    broken.write_text(
        bundled_proof("THM-MAIN").replace(
            "nu X . O(gbr) X ; nuInd 5", "nu X . O(lsd) X ; nuInd 5"
        )
    )
    assert main(["check-proof", str(broken)]) == 1
    out = capsys.readouterr().out
    assert out.startswith("FAIL line 6:")
    assert "positive" in out


def test_check_proof_json(files, capsys):
    assert main(["check-proof", files["THM-MAIN.prf"], "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"ok": True}


def test_analyze_condition(files, capsys):
    assert main(["analyze-condition", "lsd", "gsd", "gbr"]) == 0
    assert capsys.readouterr().out == (
        "lsd: closed=yes positive=no context_safe=yes\n"
        "gsd: closed=yes positive=yes context_safe=yes\n"
        "gbr: closed=yes positive=yes context_safe=yes\n"
    )

    assert main(["analyze-condition", files["conditions.txt"], "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["weak"] == {"closed": True, "positive": False, "context_safe": True}
    assert payload["strict"] == {"closed": True, "positive": True, "context_safe": True}


def test_error_exit_codes(files, tmp_path, capsys):
    assert main(["eliminate", str(tmp_path / "missing.game"), "lsd"]) == 2
    assert capsys.readouterr().err.startswith("error:")

    bad = tmp_path / "bad.game"
    bad.write_text("players: 2\nwat\n")
    assert main(["eliminate", str(bad), "lsd"]) == 2
    assert "line 2" in capsys.readouterr().err

    assert main(["evaluate", files["model.model"], files["game.game"], "rat("]) == 2
    assert "error:" in capsys.readouterr().err

    assert main(["eliminate", files["game.game"], "wat"]) == 2
    capsys.readouterr()


def test_module_entry_point(files):
    result = subprocess.run(
        [sys.executable, "-m", "epigame", "eliminate", files["game.game"], "lsd"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert result.stdout == "1: U / 2: L\n"
