"""Command-line front end: checks, demos, fixture I/O, and the implication diagram.

Exit codes: 0 success, 1 a check reported violations, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from gtlab.diagonal import bound_family, filter_escape, split_side, WitnessConditionError
from gtlab.diagram import emit_diagram
from gtlab.morphisms import ARROWS, BROKEN, interval_split_witness, run_arrow_check
from gtlab.relations import LABELS, RELATIONS, FamilyPropertyError, relation_eval, witness_valid
from gtlab.sequences import EPDFun, SpaceMismatch, UPSet, from_json
from gtlab.unions import (
    check_chain,
    footnote_grid,
    non_inclusion_report,
    orbit_bound,
    random_grid,
    rotation_action,
)


class InputError(Exception):
    pass


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _element(obj):
    try:
        return from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed element {obj!r}: {exc}") from exc


def _family(obj, kind=None) -> list:
    if not isinstance(obj, list):
        raise InputError("a family must be a JSON list")
    fam = [_element(o) for o in obj]
    if kind is not None and not all(isinstance(f, kind) for f in fam):
        raise InputError(f"every member must be a {kind.__name__}")
    return fam


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) + "\n" if args.json else text
    if getattr(args, "output", None):
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# verbs


def cmd_relations_list(args) -> int:
    rows = [
        {"label": r.label, "challenges": r.challenge_space, "responses": r.response_space, "phi": r.phi}
        for r in (RELATIONS[k] for k in LABELS)
    ]
    text = "".join(f"{r['label']}  {r['challenges']:>3} x {r['responses']:<3}  phi={r['phi']}\n" for r in rows)
    _emit(args, {"relations": rows}, text)
    return 0


def cmd_relations_eval(args) -> int:
    obj = _load(args.input)
    try:
        value = relation_eval(args.label, _element(obj["challenge"]), _element(obj["response"]))
    except KeyError as exc:
        raise InputError(f"missing key {exc}") from exc
    _emit(args, {"label": args.label, "value": value}, f"{args.label}: {value}\n")
    return 0


def cmd_relations_witness(args) -> int:
    obj = _load(args.input)
    try:
        verdict = witness_valid(args.label, _element(obj["psi"]), _family(obj["family"]))
    except KeyError as exc:
        raise InputError(f"missing key {exc}") from exc
    payload = {"label": args.label, "valid": verdict.valid, "index": verdict.index}
    _emit(args, payload, f"{args.label}: {'valid' if verdict.valid else f'refuted at member {verdict.index}'}\n")
    return 0 if verdict.valid else 1


def cmd_morphism_check(args) -> int:
    report = run_arrow_check(args.arrow, args.samples, args.seed)
    text = (
        f"{args.arrow}: {'passed' if report['passed'] else 'FAILED'} "
        f"({report['law']['samples_run']} law samples, {report['invariance']['samples_run']} mutations, "
        f"{len(report['violations'])} violations)\n"
    )
    _emit(args, report, text)
    return 0 if report["passed"] else 1


def cmd_morphism_list(args) -> int:
    names = list(ARROWS) + sorted(BROKEN)
    _emit(args, {"builtin": list(ARROWS), "broken": sorted(BROKEN)}, "".join(n + "\n" for n in names))
    return 0


def cmd_diag_bound(args) -> int:
    fam = _family(_load(args.input), EPDFun)
    if not fam:
        raise InputError("family must be nonempty")
    beta = bound_family(fam)
    _emit(args, beta.to_json(), json.dumps(beta.to_json(), sort_keys=True) + "\n")
    return 0


def cmd_diag_escape(args) -> int:
    fam = _family(_load(args.input), UPSet)
    res = filter_escape(fam, args.steps)
    ok = res.verify()
    payload = {
        "chain": [B.to_json() for B in res.chain],
        "sides": [s.value for s in res.sides],
        "escape": list(res.escape),
        "verified": ok,
    }
    text = f"sides: {' '.join(s.value for s in res.sides)}\nescape: {' '.join(map(str, res.escape))}\nverified: {ok}\n"
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_diag_split(args) -> int:
    fam = _family(_load(args.input), UPSet)
    if not fam:
        raise InputError("family must be nonempty")
    res = interval_split_witness(fam, args.horizon)
    ok = res.splits_all(fam)
    payload = {
        "witness": res.witness.to_json() if res.witness is not None else None,
        "bound": res.bound.to_json(),
        "first_good": list(res.first_good),
        "splits_all": ok,
    }
    text = f"witness: {res.witness}\nsplits every member: {ok}\n"
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_diag_side(args) -> int:
    obj = _load(args.input)
    try:
        v, x = _element(obj["v"]), _element(obj["x"])
    except KeyError as exc:
        raise InputError(f"missing key {exc}") from exc
    side = split_side(v, x)
    _emit(args, {"side": side.value}, side.value + "\n")
    return 0


def cmd_unions_demo(args) -> int:
    rng = random.Random(args.seed)
    if args.grid == "footnote":
        grid = footnote_grid(args.K, args.R, args.M)
    else:
        grid = random_grid(rng, args.N, args.R, args.M)
    action = rotation_action(rng, grid.top)
    psi = orbit_bound(grid, action)
    report = check_chain(grid, psi)
    payload = {
        "grid": {"carrier": grid.N, "rows": grid.R, "cols": grid.M},
        "chain": {
            "increasing": report.increasing,
            "inside_rows": report.inside_rows,
            "exhausts": report.exhausts,
            "class_counts": [len(F.classes()) for F in report.chain],
        },
        "passed": report.passed,
    }
    lines = [
        f"grid: N={grid.N} R={grid.R} M={grid.M}",
        f"chain increasing={report.increasing} inside_rows={report.inside_rows} exhausts={report.exhausts}",
    ]
    ok = report.passed
    if args.grid == "footnote":
        witnesses = non_inclusion_report(args.K, args.R, args.M)
        missing = [w for w in witnesses if w.pair is None]
        ok = ok and not missing
        payload["non_inclusion"] = [
            {"row": w.row, "other_row": w.other_row, "col": w.col, "pair": w.pair} for w in witnesses
        ]
        payload["passed"] = ok
        for w in witnesses:
            lines.append(f"E_{w.row}^0 not inside E_{w.other_row}^{w.col}: {w.pair}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_diagram(args) -> int:
    text = emit_diagram(args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="gtlab", description=__doc__.splitlines()[0])
    verbs = p.add_subparsers(dest="verb", required=True)

    rel = verbs.add_parser("relations").add_subparsers(dest="sub", required=True)
    rel.add_parser("list", parents=[common]).set_defaults(func=cmd_relations_list)
    ev = rel.add_parser("eval", parents=[common], help='input: {"challenge":..., "response":...}')
    ev.add_argument("label", choices=[l for l in LABELS if l != "i"])
    ev.add_argument("--input", required=True)
    ev.set_defaults(func=cmd_relations_eval)
    wi = rel.add_parser("witness", parents=[common], help='input: {"psi":..., "family":[...]}')
    wi.add_argument("label", choices=LABELS)
    wi.add_argument("--input", required=True)
    wi.set_defaults(func=cmd_relations_witness)

    mor = verbs.add_parser("morphism").add_subparsers(dest="sub", required=True)
    ck = mor.add_parser("check", parents=[common])
    ck.add_argument("arrow", choices=list(ARROWS[:4]) + sorted(BROKEN))
    ck.add_argument("--samples", type=int, default=1000)
    ck.set_defaults(func=cmd_morphism_check)
    mor.add_parser("list", parents=[common]).set_defaults(func=cmd_morphism_list)

    diag = verbs.add_parser("diag").add_subparsers(dest="sub", required=True)
    b = diag.add_parser("bound", parents=[common], help="bound a JSON list of functions")
    b.add_argument("--input", required=True)
    b.set_defaults(func=cmd_diag_bound)
    e = diag.add_parser("escape", parents=[common], help="filter escape for a JSON list of sets")
    e.add_argument("--input", required=True)
    e.add_argument("--steps", type=int, default=64)
    e.set_defaults(func=cmd_diag_escape)
    s = diag.add_parser("split", parents=[common], help="one set splitting every member of a JSON list")
    s.add_argument("--input", required=True)
    s.add_argument("--horizon", type=int, default=64)
    s.set_defaults(func=cmd_diag_split)
    sd = diag.add_parser("side", parents=[common], help='input: {"v":..., "x":...}')
    sd.add_argument("--input", required=True)
    sd.set_defaults(func=cmd_diag_side)

    uni = verbs.add_parser("unions").add_subparsers(dest="sub", required=True)
    demo = uni.add_parser("demo", parents=[common])
    demo.add_argument("--grid", choices=["footnote", "random"], default="footnote")
    demo.add_argument("--K", type=int, default=16)
    demo.add_argument("--R", type=int, default=4)
    demo.add_argument("--M", type=int, default=4)
    demo.add_argument("--N", type=int, default=64, help="carrier size for random grids")
    demo.set_defaults(func=cmd_unions_demo)

    dg = verbs.add_parser("diagram")
    dg.add_argument("--format", choices=["dot", "json"], default="dot")
    dg.add_argument("--output")
    dg.set_defaults(func=cmd_diagram)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("samples", "steps", "horizon", "K", "R", "M", "N"):
        if getattr(args, name, 1) < 1:
            parser.print_usage(sys.stderr)
            print(f"gtlab: --{name} must be positive", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (InputError, SpaceMismatch, FamilyPropertyError, WitnessConditionError, ValueError) as exc:
        print(f"gtlab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
