"""Command-line front end.

Exit codes: 0 when everything checked out, 1 when a violation or a negative
verdict was found, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classify as cl
from . import prelie as pl
from . import realize as rz
from . import search as sr
from .errors import BudgetExceeded, InvalidParameter, NoInjectionA0
from .scalar import T, parse_scalar


class UsageError(Exception):
    pass


def _parse(text: str, flag: str, symbolic: bool | None = None):
    try:
        return parse_scalar(text, symbolic)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag}: cannot parse {text!r} ({exc})") from None


def _closed(family: str, param, flag: str = "--param") -> pl.StructureMap:
    try:
        if family == "A":
            return pl.ClosedA(param)
        if family == "B":
            return pl.ClosedB(param)
    except InvalidParameter as exc:
        raise UsageError(f"{flag}: {exc}") from None
    raise UsageError(f"--family: expected A or B, got {family!r}")


def _param(args):
    if args.param is None:
        if args.symbolic:
            return T
        raise UsageError("--param is required unless --symbolic is given")
    return _parse(args.param, "--param", True if args.symbolic else None)


def _structure(args) -> pl.StructureMap:
    if args.table is not None:
        if args.family is not None:
            raise UsageError("--table and --family are mutually exclusive")
        try:
            data = json.loads(Path(args.table).read_text())
            return pl.structure_from_json(data, True if args.symbolic else None)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"--table: cannot read {args.table} ({exc})") from None
    if args.family is None:
        raise UsageError("one of --family or --table is required")
    return _closed(args.family, _param(args))


def _family_param(text: str, flag: str) -> pl.StructureMap:
    family, sep, param = text.partition(":")
    if not sep:
        raise UsageError(f"{flag}: expected FAMILY:PARAM such as A:2 or B:2/5")
    return _closed(family.strip(), _parse(param, flag), flag)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.text:
        print("\n".join(text_lines))
    else:
        print(json.dumps(payload, indent=2))


def _radius(args, S, default: int) -> int:
    if args.radius is not None:
        if args.radius < 1:
            raise UsageError("--radius: must be positive")
        return args.radius
    return S.radius if isinstance(S, pl.Table) else default


# -- subcommands ---------------------------------------------------------------


def cmd_check(args) -> int:
    S = _structure(args)
    radius = _radius(args, S, 4)
    if isinstance(S, pl.Table) and radius > S.radius:
        raise UsageError(f"--radius: {radius} exceeds the table radius {S.radius}")
    report = pl.defect_scan(S, radius, jobs=args.jobs)
    payload = {"command": "check", "structure": pl.structure_to_json(S), **report.to_json()}
    lines = [f"defect scan radius {radius}: {len(report.violations)} violation(s)"]
    lines += [f"  C({i},{j},{k}) = {v}" for i, j, k, v in report.violations]
    _emit(args, payload, lines)
    return 0 if report.ok else 1


def cmd_classify(args) -> int:
    S = _structure(args)
    radius = _radius(args, S, 8)
    T_ = S if isinstance(S, pl.Table) and radius == S.radius else S.tabulate(radius)
    result = cl.classify(T_)
    payload = {"command": "classify", "structure": pl.structure_to_json(S), **result.to_json()}
    v = result.verdict.to_json()
    lines = [f"verdict: {v['tag']}"] + [f"  {k}: {val}" for k, val in v.items() if k != "tag"]
    lines.append(f"  reversed: {result.reversed}")
    lines += [f"  trace: {step.to_json()}" for step in result.trace]
    _emit(args, payload, lines)
    return 0 if result.tag in ("TypeA", "TypeB") else 1


def cmd_iso(args) -> int:
    S1, S2 = _family_param(args.lhs, "--lhs"), _family_param(args.rhs, "--rhs")
    radius = args.radius if args.radius is not None else 6
    violations = cl.iso_check(args.map, S1, S2, radius)
    payload = {
        "command": "iso",
        "map": args.map,
        "lhs": pl.structure_to_json(S1),
        "rhs": pl.structure_to_json(S2),
        "radius": radius,
        "violations": [[i, j, d.to_json()] for i, j, d in violations],
    }
    lines = [f"{args.map}: {len(violations)} violation(s) on radius {radius}"]
    lines += [f"  (e_{i}, e_{j}): {d}" for i, j, d in violations]
    _emit(args, payload, lines)
    return 0 if not violations else 1


def cmd_invariants(args) -> int:
    S = _structure(args)
    if isinstance(S, pl.Table):
        raise UsageError("--table: invariants need a closed family")
    radius = _radius(args, S, 4)
    if radius < 3:
        raise UsageError("--radius: invariants need radius >= 3")
    inv = cl.invariants_extract(S, radius)
    payload = {"command": "invariants", "structure": pl.structure_to_json(S), "radius": radius, **inv.to_json()}
    lines = [f"{k}: {val}" for k, val in inv.to_json().items()]
    _emit(args, payload, lines)
    return 0


def cmd_search(args) -> int:
    values = [_parse(v, "--values", False) for v in args.values.split(",") if v.strip()]
    try:
        cfg = sr.SearchConfig(
            radius=args.radius if args.radius is not None else 2,
            value_set=tuple(values),
            fix_g0=not args.no_fix_g0,
            case_split=args.case,
            budget=args.budget,
        )
    except ValueError as exc:
        raise UsageError(f"--values: {exc}") from None
    try:
        report = sr.run_search(cfg, jobs=args.jobs)
    except BudgetExceeded as exc:
        raise UsageError(f"--budget: {exc}") from None
    if args.csv:
        Path(args.csv).write_text(report.census_csv())
    payload = {"command": "search", **report.to_json()}
    lines = [
        f"candidates: {report.total_candidates}",
        f"pre-Lie survivors: {report.prelie_survivors}",
        f"simple survivors: {report.simple_survivors}",
        f"theorem consistent: {report.theorem_consistent}",
    ]
    for c in report.census:
        detail = " ".join(f"{k}={v}" for k, v in c.verdict.items() if k != "tag")
        lines.append(f"  {c.count:>6}  {c.verdict['tag']} {detail}".rstrip() + ("  (reversed)" if c.reversed else ""))
    _emit(args, payload, lines)
    return 0 if report.theorem_consistent else 1


def cmd_realize(args) -> int:
    if args.family not in ("A", "B"):
        raise UsageError("--family: realize needs A or B")
    param = _param(args)
    radius = args.radius if args.radius is not None else 4
    payload = {"command": "realize", "family": args.family, "param": str(param), "radius": radius}
    if args.family == "A":
        try:
            R = rz.realize_A(param, radius)
        except NoInjectionA0 as exc:
            payload["error"] = "NoInjectionA0"
            payload["explanation"] = str(exc)
            _emit(args, payload, [f"NoInjectionA0: {exc}"])
            return 1
        violations = rz.verify_realization(R, pl.ClosedA(param), radius)
    else:
        S = _closed("B", param)
        if param != 0:
            obs = rz.obstruction_B(param)
            payload["obstruction"] = obs.to_json()
            _emit(args, payload, [
                f"e_1 o e_-1 + e_-1 o e_1 = {obs.abstract}",
                f"exponential image: {obs.realized}",
                f"consistent: {obs.consistent}",
            ])
            return 0 if obs.consistent else 1
        R = rz.realize_B0(radius, S.one)
        violations = rz.verify_realization(R, S, radius)
    payload["realization"] = R.to_json()
    payload["violations"] = [[i, j, d.to_json()] for i, j, d in violations]
    lines = [f"e_{i} -> {R[i]}" for i in range(-radius, radius + 1)]
    lines.append(f"{len(violations)} violation(s)")
    _emit(args, payload, lines)
    return 0 if not violations else 1


def cmd_bracket(args) -> int:
    S = _structure(args)
    radius = _radius(args, S, 4)
    if args.bar and not isinstance(S, pl.ClosedB):
        raise UsageError("--bar: only meaningful for family B")
    rows = []
    rng = range(-radius, radius + 1)
    for i in rng:
        for j in rng:
            if isinstance(S, pl.Table) and abs(i + j) > radius:
                continue
            if args.bar:
                br = pl.bar_bracket(S.b, S.e(i), S.e(j))
            else:
                br = pl.bracket(S, S.e(i), S.e(j))
            rows.append([i, j, str(br.coefficient_at(i + j, S.zero))])
    payload = {"command": "bracket", "structure": pl.structure_to_json(S), "bar": args.bar, "radius": radius, "brackets": rows}
    lines = [f"[e_{i}, e_{j}] = ({c}) e_{i + j}" for i, j, c in rows]
    _emit(args, payload, lines)
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradedprelie",
        description="Exact checks for graded pre-Lie products e_i o e_j = f(i) g(j) e_{i+j}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, structure=True):
        if structure:
            p.add_argument("--family", choices=["A", "B"])
            p.add_argument("--param", help="scalar such as 2/5, 1+i or t")
            p.add_argument("--table", help="JSON file with a tabulated structure")
            p.add_argument("--symbolic", action="store_true", help="use the formal parameter t")
        p.add_argument("--radius", type=int)
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON report (default)")
        fmt.add_argument("--text", action="store_true", help="plain text report")
        p.add_argument("--jobs", type=int, default=1)

    common(sub.add_parser("check", help="scan the defect equations on a window"))
    common(sub.add_parser("classify", help="classify a tabulated structure"))
    p = sub.add_parser("iso", help="check a built-in isomorphism on a window")
    common(p, structure=False)
    p.add_argument("--map", choices=["flipA", "flipB"], required=True)
    p.add_argument("--lhs", required=True, help="FAMILY:PARAM, e.g. A:2")
    p.add_argument("--rhs", required=True, help="FAMILY:PARAM, e.g. A:-2")
    common(sub.add_parser("invariants", help="isomorphism invariants of a closed family"))
    p = sub.add_parser("search", help="exhaustive search over small tables")
    common(p, structure=False)
    p.add_argument("--values", default="0,1,-1,2,1/2", help="comma-separated value set")
    p.add_argument("--budget", type=int, default=sr.DEFAULT_BUDGET)
    p.add_argument("--case", choices=list(sr.CASE_SPLITS), default="all")
    p.add_argument("--no-fix-g0", action="store_true")
    p.add_argument("--csv", help="also write the census as CSV")
    common(sub.add_parser("realize", help="vector-field realizations and obstructions"))
    p = sub.add_parser("bracket", help="bracket constants on a window")
    common(p)
    p.add_argument("--bar", action="store_true", help="family B in the rescaled basis")
    return parser


COMMANDS = {
    "check": cmd_check,
    "classify": cmd_classify,
    "iso": cmd_iso,
    "invariants": cmd_invariants,
    "search": cmd_search,
    "realize": cmd_realize,
    "bracket": cmd_bracket,
}


# flags whose values may start with '-' (such as -5/3 or -1,0,1)
_VALUE_FLAGS = ("--param", "--values", "--lhs", "--rhs")


def _glue_values(argv: list[str]) -> list[str]:
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
