"""Command-line front end: resolve, chart, homotopy, ahss, classify, validate.

All outputs are deterministic for fixed inputs (sorted JSON keys, fixed SVG
layout), so identical invocations are byte-identical.  Exit codes: 0 on
success, 1 on a computation error (with a diagnostic naming the failing
piece), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import adams, ahss, classify, modules, resolution, thom
from .groups import FinAbGroup


def _parse_stems(text: str) -> List[int]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",")]


def _load_module(spec: str, truncation: Optional[int],
                 shift: int) -> modules.GradedA1Module:
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        t = truncation if truncation is not None else 20
        base = name.split("(")[0]
        if base in ("MO", "MTO", "MSO"):
            args = name[len(base):].strip("()")
            return thom.thom_module(base, int(args), shift=shift, truncation=t)
        if base == "TwistedBZ":
            args = name[len(base):].strip("()")
            return thom.twisted_bz_module(int(args), truncation=t)
        m = modules.standard_module(name, truncation=truncation)
        return modules.suspend(m, shift)
    return modules.suspend(modules.load_module(spec), shift)


def _parse_space(expr: str, truncation: int) -> ahss.SpaceCohomology:
    """Builtins combined with * (product) and ^k (power)."""
    out = None
    for factor in expr.split("*"):
        factor = factor.strip()
        power = 1
        if "^" in factor:
            factor, p = factor.rsplit("^", 1)
            power = int(p)
        space = ahss.space_builtin(factor.strip(), truncation)
        space = ahss.space_power(space, power)
        out = space if out is None else ahss.kunneth(out, space)
    if out is None:
        raise ValueError("empty space expression")
    return out


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _group_json(g: FinAbGroup) -> dict:
    return {"rank": g.rank, "torsion": list(g.torsion)}


def cmd_resolve(args: argparse.Namespace) -> int:
    module = _load_module(args.module, args.truncation, args.shift)
    r = resolution.minimal_resolution(module, args.smax, args.tmax)
    data = resolution.resolution_to_json_dict(r)
    _emit(json.dumps(data, indent=1, sort_keys=True) + "\n", args.out)
    return 0


def cmd_chart(args: argparse.Namespace) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    chart = resolution.chart_from_json_dict(
        data["chart"] if "chart" in data else data)
    stems = _parse_stems(args.stems) if args.stems else None
    _emit(adams.chart_render(chart, args.format, stems=stems), args.out)
    return 0


def cmd_homotopy(args: argparse.Namespace) -> int:
    stems = _parse_stems(args.stems)
    out = adams.mth_pipeline(args.case, stems)
    if args.format == "json":
        data = {
            "case": args.case,
            "two_complete": out.two_complete,
            "groups": [{"stem": n, **_group_json(g)} for n, g in out.table()],
        }
        _emit(json.dumps(data, indent=1, sort_keys=True) + "\n", args.out)
    else:
        lines = [f"pi_{n} = {g}" for n, g in out.table()]
        if out.candidates:
            lines.append(f"# unresolved differential candidates: {out.candidates}")
        lines.append("# Z means the 2-completed integers")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_ahss(args: argparse.Namespace) -> int:
    space = _parse_space(args.space, args.truncation or 12)
    result = ahss.ko4_ahss(space, args.n)
    lines = [f"E_infinity diagonal for {result.space}, n = {args.n} "
             f"({result.certificate}):"]
    for cell, group in sorted(result.e_inf.items()):
        lines.append(f"  {cell}: {group}")
    lines.append(f"torsion length: {result.torsion_length}")
    for note in result.notes:
        lines.append(f"note: {note}")
    if args.policy:
        k = args.space.count("*") + 1
        if "^" in args.space:
            k = int(args.space.rsplit("^", 1)[1])
        group = ahss.resolve_extensions(result, args.policy, k=k)
        lines.append(f"group: {group}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    kind, _, case = args.case.partition(":")
    rows: List[dict] = []
    if kind == "bosonic":
        dims = _parse_stems(args.dims) if args.dims else list(range(5))
        for d in dims:
            g = classify.bosonic_classification(case, d)
            rows.append({"dim": d, "group": str(g), **_group_json(g)})
    elif kind == "fermionic":
        name = case.split("(")[0]
        params = case[len(name):].strip("()")
        if name == "C2k_dim3":
            out = classify.fermionic_classification(name, k=int(params))
        elif name == "SpinZ2n":
            n_str, stem_str = params.split(",")
            out = classify.fermionic_classification(
                name, n=int(n_str), stem=int(stem_str))
        else:
            out = classify.fermionic_classification(name)
        if isinstance(out, classify.Certificate):
            rows.append({"case": case, "certificate": out.render()})
        else:
            rows.append({"case": case, "group": str(out), **_group_json(out)})
    else:
        raise ValueError(f"unknown classification kind {kind!r}")
    if args.format == "json":
        _emit(json.dumps(rows, indent=1, sort_keys=True) + "\n", args.out)
    else:
        lines = []
        for row in rows:
            if "dim" in row:
                lines.append(f"d={row['dim']}: {row['group']}")
            else:
                lines.append(f"{row['case']}: {row.get('group', row.get('certificate'))}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    module = _load_module(args.module, args.truncation, 0)
    report = modules.validate(module)
    if report.ok:
        _emit("ok\n", args.out)
        return 0
    _emit("\n".join(report.failures) + "\n", args.out)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="a1ext",
        description="Ext charts over A(1), spectral sequences, SPT tables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="minimal resolution and chart JSON")
    p.add_argument("--module", required=True,
                   help="builtin:NAME(args) or a module JSON file")
    p.add_argument("--smax", type=int, default=8)
    p.add_argument("--tmax", type=int, default=16)
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("chart", help="render a chart JSON file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.add_argument("--stems", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("homotopy", help="homotopy groups of the bordism cases")
    p.add_argument("--case", required=True,
                   help="pin+, pin-, pinc-, pinc+, g+, spinz2n(n)")
    p.add_argument("--stems", default="0..4")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_homotopy)

    p = sub.add_parser("ahss", help="ko<0..4> spectral sequence of a space")
    p.add_argument("--space", required=True,
                   help='e.g. "RPinf", "RPinf^2", "RPinf*BC2n(2)"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--policy", choices=("maximal_torsion", "sw_oracle"),
                   default=None)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ahss)

    p = sub.add_parser("classify", help="SPT classification tables")
    p.add_argument("--case", required=True,
                   help="bosonic:none_T | bosonic:T_U1 | bosonic:U1 | "
                        "fermionic:C2_dim4 | fermionic:C2xC4_dim4 | "
                        "fermionic:C2k_dim3(k) | fermionic:SpinZ2n(n,stem)")
    p.add_argument("--dims", default=None, help="e.g. 0..4")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("validate", help="check the module axioms")
    p.add_argument("--module", required=True)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, adams.ChartError,
            ahss.AhssError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
