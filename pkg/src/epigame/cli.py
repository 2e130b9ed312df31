"""Command-line front end.

Subcommands: ``eliminate``, ``evaluate``, ``check-valid``, ``check-proof``,
``analyze-condition``.  Exit codes: 0 on success (and for positive semantic
verdicts), 1 for negative semantic verdicts (invalid formula, failed proof),
2 for usage, file, or parse errors.  Every subcommand accepts ``--json``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .beliefs import ModelFormatError, format_model, parse_model
from .conditions import (
    BUILTIN_CONDITION_TEXT,
    ConditionRegistry,
    FormulaO,
    FormulaSyntaxError,
    analyze,
    builtin,
    parse_condition_file,
)
from .games import GameFormatError, parse_game
from .modal import ForallX, ModalError, interpret, interpret_so, iter_subformulas, parse_nu
from .operators import (
    ConditionOperator,
    NoFixpointError,
    OperatorError,
    format_trace,
    iterate,
)
from .proofs import ProofSyntaxError, check_proof, parse_proof, standard_lemmas

_USER_ERRORS = (
    GameFormatError,
    ModelFormatError,
    FormulaSyntaxError,
    ProofSyntaxError,
    OperatorError,
    ModalError,
    NoFixpointError,
    OSError,
    KeyError,
    ValueError,
)


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_registry(condition_files: list[str] | None) -> ConditionRegistry:
    registry = ConditionRegistry.standard()
    for path in condition_files or []:
        for name, formula in parse_condition_file(_read(path)).items():
            registry.register(name, formula)
    return registry


def _resolve_condition(spec: str, name: str | None) -> tuple[str, FormulaO]:
    """A builtin name, or a condition file (with --name when it defines
    several conditions)."""
    if spec in BUILTIN_CONDITION_TEXT:
        return spec, builtin(spec)
    defined = parse_condition_file(_read(spec))
    if name is not None:
        if name not in defined:
            raise ValueError(f"{spec} does not define condition {name!r}")
        return name, defined[name]
    if len(defined) != 1:
        raise ValueError(f"{spec} defines {len(defined)} conditions; pick one with --name")
    return next(iter(defined.items()))


def _survivors_payload(restriction) -> dict:
    return {
        str(i + 1): list(restriction.ordered(i)) for i in restriction.game.players
    }


def _cmd_eliminate(args: argparse.Namespace) -> int:
    game = parse_game(_read(args.game))
    _, formula = _resolve_condition(args.condition, args.name)
    trace = iterate(ConditionOperator(game, formula))
    if args.json:
        payload = {
            "survivors": _survivors_payload(trace.outcome),
            "closure_ordinal": trace.closure_ordinal,
        }
        if args.trace:
            payload["stages"] = [_survivors_payload(stage) for stage in trace.stages]
        print(json.dumps(payload))
        return 0
    if args.trace:
        print(format_trace(trace))
    print(trace.outcome)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    game = parse_game(_read(args.game))
    model = parse_model(_read(args.model), game)
    registry = _load_registry(args.conditions)
    formula = parse_nu(args.formula)
    second_order = any(isinstance(f, ForallX) for f in iter_subformulas(formula))
    run = interpret_so if second_order else interpret
    event = run(model, formula, registry=registry)
    ordered = model.ordered_event(event)
    if args.json:
        print(json.dumps({"states": list(ordered)}))
    else:
        print(" ".join(ordered))
    return 0


def _cmd_check_valid(args: argparse.Namespace) -> int:
    from .modal import check_validity

    game = parse_game(_read(args.game))
    registry = _load_registry(args.conditions)
    formula = parse_nu(args.formula)
    if args.random is not None:
        count, max_states = args.random
        report = check_validity(
            game, formula, registry, max_states=max_states, samples=count, seed=args.seed
        )
    else:
        report = check_validity(game, formula, registry, max_states=args.exhaustive)
    if args.json:
        payload: dict = {"valid": report.valid, "models_checked": report.models_checked}
        if report.countermodel is not None:
            payload["countermodel"] = format_model(report.countermodel)
        print(json.dumps(payload))
    elif report.valid:
        print("VALID-ON-CORPUS")
    else:
        print("countermodel:")
        print(format_model(report.countermodel), end="")
    return 0 if report.valid else 1


def _cmd_check_proof(args: argparse.Namespace) -> int:
    script = parse_proof(_read(args.proof))
    registry = _load_registry(args.conditions)
    report = check_proof(script, registry, standard_lemmas(registry))
    if args.json:
        payload = {"ok": report.ok}
        if report.failure:
            payload["line"] = report.failure.line
            payload["reason"] = report.failure.reason
        print(json.dumps(payload))
    elif report.ok:
        print("OK")
    else:
        print(f"FAIL line {report.failure.line}: {report.failure.reason}")
    return 0 if report.ok else 1


def _cmd_analyze_condition(args: argparse.Namespace) -> int:
    found: dict[str, FormulaO] = {}
    for spec in args.condition:
        if spec in BUILTIN_CONDITION_TEXT:
            found[spec] = builtin(spec)
        else:
            for name, formula in parse_condition_file(_read(spec)).items():
                found[name] = formula
    results = {name: analyze(formula) for name, formula in found.items()}
    if args.json:
        print(
            json.dumps(
                {
                    name: {
                        "closed": r.closed,
                        "positive": r.positive,
                        "context_safe": r.context_safe,
                    }
                    for name, r in results.items()
                }
            )
        )
    else:
        for name, r in results.items():
            flags = (
                f"closed={'yes' if r.closed else 'no'} "
                f"positive={'yes' if r.positive else 'no'} "
                f"context_safe={'yes' if r.context_safe else 'no'}"
            )
            print(f"{name}: {flags}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epigame",
        description="Optimality conditions, strategy elimination, belief models, proofs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eliminate", help="iterate a condition's elimination operator")
    p.add_argument("game", help="game file")
    p.add_argument("condition", help="builtin condition name or condition file")
    p.add_argument("--name", help="condition to pick from a multi-condition file")
    p.add_argument("--trace", action="store_true", help="print every stage")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_eliminate)

    p = sub.add_parser("evaluate", help="evaluate a modal formula on a belief model")
    p.add_argument("model", help="belief model file")
    p.add_argument("game", help="game file")
    p.add_argument("formula", help="modal formula")
    p.add_argument("--conditions", action="append", help="extra condition file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("check-valid", help="search belief models for a countermodel")
    p.add_argument("game", help="game file")
    p.add_argument("formula", help="modal formula")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--exhaustive", type=int, metavar="K", help="all models with up to K states"
    )
    group.add_argument(
        "--random",
        type=int,
        nargs=2,
        metavar=("N", "K"),
        help="N sampled models with up to K states",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--conditions", action="append", help="extra condition file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check_valid)

    p = sub.add_parser("check-proof", help="check a proof script")
    p.add_argument("proof", help="proof script file")
    p.add_argument("--conditions", action="append", help="extra condition file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check_proof)

    p = sub.add_parser("analyze-condition", help="report closed/positive/context-safe")
    p.add_argument("condition", nargs="+", help="builtin names or condition files")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_analyze_condition)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        message = str(exc)
        if isinstance(exc, KeyError):
            message = exc.args[0] if exc.args else message
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
