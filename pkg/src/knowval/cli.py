"""Command-line front end.

Exit codes: 0 for an affirmative result, 1 for a negative one, 2 for any
parse, validation or guard error.  All JSON output is pretty-printed with
sorted keys so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from knowval.bisim import bisimilar_multi, bisimilar_single
from knowval.canonical import (
    canonical_model_multi,
    canonical_model_single,
    spec_from_dict,
)
from knowval.dependency import entails, satisfiable
from knowval.proofcheck import check_proof, proof_from_dict
from knowval.semantics import (
    PointedModel,
    evaluate,
    inspect_update,
    load_model,
    model_to_dict,
)
from knowval.syntax import parse_formula, print_formula, translate


class CliError(Exception):
    pass


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_pointed(path: str) -> PointedModel:
    model, actual = load_model(path)
    if actual is None:
        raise CliError(f"model file {path!r} has no 'actual' state")
    return PointedModel(model, actual)


def _model_mode(model) -> str:
    return "single" if model.is_single else "multi"


def _cmd_check(args) -> int:
    pm = _load_pointed(args.model)
    f = parse_formula(args.formula, _model_mode(pm.model))
    verdict = evaluate(pm, f)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_update(args) -> int:
    pm = _load_pointed(args.model)
    updated = inspect_update(pm, args.const)
    _write_output(_dump_json(model_to_dict(updated.model, updated.actual)), args.output)
    return 0


def _cmd_translate(args) -> int:
    f = parse_formula(args.formula, args.mode)
    print(print_formula(translate(f)))
    return 0


def _cmd_sat(args) -> int:
    f = parse_formula(args.formula, args.mode)
    pm = satisfiable(translate(f), mode=args.mode, max_atoms=args.max_atoms)
    if pm is None:
        print("unsat")
        return 1
    print("sat")
    _write_output(_dump_json(model_to_dict(pm.model, pm.actual)), args.output)
    return 0


def _read_premises(path: str, mode: str):
    out = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(parse_formula(line, mode))
    return out


def _cmd_entail(args) -> int:
    premises = _read_premises(args.premises, args.mode)
    goal = parse_formula(args.formula, args.mode)
    verdict = entails(premises, goal, mode=args.mode, max_atoms=args.max_atoms)
    print("valid" if verdict else "invalid")
    return 0 if verdict else 1


def _cmd_bisim(args) -> int:
    pm1 = _load_pointed(args.model1)
    pm2 = _load_pointed(args.model2)
    mode1, mode2 = _model_mode(pm1.model), _model_mode(pm2.model)
    if mode1 != mode2:
        raise CliError(f"mode mismatch: {mode1} vs {mode2}")
    if mode1 == "single":
        verdict = bisimilar_single(pm1, pm2)
        print("bisimilar" if verdict else "not-bisimilar")
        return 0 if verdict else 1
    relation = bisimilar_multi(pm1, pm2)
    if relation is None:
        print("not-bisimilar")
        return 1
    print("bisimilar")
    for s, t in sorted(relation.pairs):
        print(f"{s} ~ {t}")
    return 0


def _cmd_canonical(args) -> int:
    with open(args.deps, encoding="utf-8") as fh:
        spec = spec_from_dict(json.load(fh))
    if spec.mode == "single":
        pm = canonical_model_single(spec)
    else:
        pm = canonical_model_multi(spec)
    _write_output(_dump_json(model_to_dict(pm.model, pm.actual)), args.output)
    return 0


def _cmd_prove(args) -> int:
    with open(args.proof, encoding="utf-8") as fh:
        proof = proof_from_dict(json.load(fh))
    verdict = check_proof(proof, max_taut_atoms=args.max_atoms)
    print(str(verdict))
    return 0 if verdict.accepted else 1


def _add_mode(p) -> None:
    p.add_argument(
        "--mode", choices=("single", "multi"), default="single",
        help="formula syntax mode (default: single)",
    )


def _add_guard(p) -> None:
    p.add_argument(
        "--max-atoms", type=int, default=16, metavar="N",
        help="atom-count guard for normal forms and truth tables (default 16)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knowval",
        description="Model checking, dependency reasoning, bisimulation and "
        "proof checking for the logic of knowing and inspecting values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula on a pointed model")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-f", "--formula", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("update", help="publicly inspect a constant")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-c", "--const", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_update)

    p = sub.add_parser("translate", help="translate into dependency normal form")
    p.add_argument("-f", "--formula", required=True)
    _add_mode(p)
    p.set_defaults(func=_cmd_translate)

    p = sub.add_parser("sat", help="decide satisfiability, synthesizing a model")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-o", "--output")
    _add_mode(p)
    _add_guard(p)
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("entail", help="finite-premise entailment")
    p.add_argument("-p", "--premises", required=True, help="file, one formula per line")
    p.add_argument("-f", "--formula", required=True, help="goal formula")
    _add_mode(p)
    _add_guard(p)
    p.set_defaults(func=_cmd_entail)

    p = sub.add_parser("bisim", help="check two pointed models for bisimilarity")
    p.add_argument("-m1", "--model1", required=True, dest="model1")
    p.add_argument("-m2", "--model2", required=True, dest="model2")
    p.set_defaults(func=_cmd_bisim)

    p = sub.add_parser("canonical", help="canonical model from dependency sets")
    p.add_argument("-d", "--deps", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_canonical)

    p = sub.add_parser("prove", help="verify a Hilbert-style proof file")
    p.add_argument("-p", "--proof", required=True)
    _add_guard(p)
    p.set_defaults(func=_cmd_prove)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
