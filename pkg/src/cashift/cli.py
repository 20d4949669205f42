"""Command-line front end.

Every subcommand prints a JSON report ``{"command", "config", "result",
"version"}`` (keys sorted) unless an image format is requested.  Exit codes:
2 for usage and parse errors, 1 when a check comes back negative, else 0.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional, Sequence

from . import __version__
from .ca import CAShift, ca_normalize, constant_points
from .errors import BudgetError, NotCAFormError, ParseError, TheoremViolation
from .factor import Factorization, univariate_factor
from .homs import (
    DEFAULT_RULE_BUDGET,
    aut_group,
    dual_hom_search,
    hom_search,
)
from .laurent import LaurentPoly, collinear_support, parse_poly, shape
from .mixing import (
    default_dilations,
    horizontal_mixing_check,
    mixing_scan,
    nonmixing_certificate,
    primitive_set,
    single_cell,
)
from .shift import Configuration, cylinder_measure, evolve, language, render


class UsageError(Exception):
    pass


_POINT = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)")


def parse_shape(text: str, d: int) -> list[tuple[int, ...]]:
    """``"(a,b);(c,d)"`` -> list of exponent vectors of length ``d``."""
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _POINT.fullmatch(chunk)
        if not m:
            raise UsageError(f"bad shape point {chunk!r}")
        pt = tuple(int(v) for v in m.group(1).split(","))
        if len(pt) != d:
            raise UsageError(f"point {pt} has {len(pt)} coordinates, expected {d}")
        pts.append(pt)
    if not pts:
        raise UsageError("empty shape")
    return pts


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _ca(args, which: str = "phi") -> CAShift:
    text = getattr(args, which)
    if text is not None:
        return CAShift(args.p, args.d, parse_poly(text, args.p, args.d))
    if which == "phi" and args.poly is not None:
        return ca_normalize(parse_poly(args.poly, args.p, args.d))[0]
    raise UsageError(f"--{which} is required for {args.command}")


def _poly(args, name: str = "poly") -> LaurentPoly:
    return parse_poly(_need(args, name), args.p, args.d)


def _factor_json(fac: Factorization) -> dict:
    return {
        "unit": fac.unit,
        "monomial": list(fac.monomial) if fac.monomial is not None else None,
        "factors": [[str(g), e] for g, e in fac.factors],
    }


# ----------------------------------------------------------------- commands


def cmd_normalize(args):
    A = _poly(args)
    ca, tr = ca_normalize(A)
    return {
        "phi": str(ca.phi),
        "P": str(ca.P),
        "transform": tr.describe(),
        "inverted_axes": list(tr.inverted_axes),
        "unit": tr.unit,
        "shift": list(tr.shift),
    }, 0


def cmd_evolve(args):
    ca = _ca(args)
    row = parse_ints(args.row)
    top = Configuration.from_mapping(
        {(i,) + (0,) * (ca.d - 2) + (0,): v for i, v in enumerate(row)}, ca.p)
    grid = evolve(ca, top, args.steps, mode=args.mode)
    if args.format in ("text", "pgm"):
        return render(grid, args.format), 0
    lo, hi = grid.column_range()
    return {"phi": str(ca.phi), "t0": grid.t0, "columns": [lo, hi], "rows": grid.rows()}, 0


def cmd_language(args):
    ca = _ca(args)
    cells = parse_shape(_need(args, "shape"), ca.d)
    L = language(ca, cells)
    out = {"cells": [list(c) for c in L.window.cells], "rank": L.rank, "size": L.size,
           "basis": [list(b) for b in L.basis], "pivots": list(L.pivots)}
    if args.format == "text":
        lines = ["".join(str(v) for v in L.element(i)) for i in range(min(L.size, args.budget))]
        return ("\n".join(lines) + "\n").encode(), 0
    return out, 0


def cmd_measure(args):
    ca = _ca(args)
    cells = parse_shape(_need(args, "shape"), ca.d)
    values = parse_ints(_need(args, "values"))
    if len(values) != len(cells):
        raise UsageError(f"{len(cells)} cells but {len(values)} values")
    cfg = Configuration.from_mapping(dict(zip(cells, values)), ca.p)
    mu = cylinder_measure(ca, [cfg])
    return {"measure": mu.to_json(), "value": str(mu)}, 0


def cmd_mixing_scan(args):
    ca = _ca(args)
    offsets = primitive_set(parse_shape(_need(args, "shape"), ca.d))
    values = parse_ints(args.values) if args.values else [1] * len(offsets)
    if len(values) != len(offsets):
        raise UsageError(f"{len(offsets)} offsets but {len(values)} event values")
    dil = parse_ints(args.dilations) if args.dilations else default_dilations(ca.p)
    report = mixing_scan(ca, [single_cell(v, ca.d) for v in values], offsets, dil)
    out = report.to_json()
    out["product"] = report.product.to_json()
    out["all_equal"] = all(e.equal for e in report.entries)
    return out, 0


def cmd_nonmix_cert(args):
    ca = _ca(args)
    R = parse_poly(args.r or "1", ca.p, ca.d)
    cert = nonmixing_certificate(ca, R, args.jmax)
    return cert.to_json(), 0 if cert.verdict == "non-mixing-witnessed" else 1


def cmd_horizontal_check(args):
    ca = _ca(args)
    offsets = parse_shape(_need(args, "shape"), ca.d)
    report = horizontal_mixing_check(ca, offsets, mmax=args.mmax)
    return report.to_json(), 0 if report.passed else 1


def cmd_hom_search(args):
    caP = _ca(args)
    caQ = _ca(args, "psi")
    S = parse_shape(args.shape or "(" + ",".join(["0"] * args.d) + ")", caP.d)
    result = hom_search(caP, caQ, S, budget=args.budget, method=args.method)
    out = result.to_json()
    # maps not fixing 0 are a 0-fixing rule plus a constant point of Q
    out["constant_offsets"] = constant_points(caQ)
    return out, 0


def cmd_dual_homs(args):
    caP = _ca(args)
    caQ = _ca(args, "psi") if args.psi is not None else caP
    bound = parse_shape(_need(args, "shape"), caP.d)
    classes = dual_hom_search(caP, caQ, bound)
    return {"classes": [c.to_json() for c in classes], "count": len(classes)}, 0


def cmd_aut(args):
    ca = _ca(args)
    hint = None
    if args.hint:
        factors = []
        for item in args.hint:
            poly, _, exp = item.rpartition(":")
            if not poly:
                poly, exp = exp, "1"
            factors.append((parse_poly(poly, ca.p, ca.d), int(exp)))
        mono = tuple(parse_ints(args.hint_monomial)) if args.hint_monomial else None
        hint = Factorization(args.hint_unit % ca.p, tuple(factors), mono)
    desc = aut_group(ca, hint)
    return desc.to_json(), 0


def cmd_collinear(args):
    A = _poly(args) if args.poly is not None else _ca(args).P
    hit = collinear_support(A)
    if hit is None:
        return {"collinear": False}, 0
    m, step = hit
    return {"collinear": True, "direction": list(m), "step": step, "shape": sorted(map(list, shape(A)))}, 0


def cmd_factor(args):
    A = _poly(args)
    return _factor_json(univariate_factor(A)), 0


def cmd_constants(args):
    ca = _ca(args)
    return {"constants": constant_points(ca)}, 0


COMMANDS = {
    "normalize": cmd_normalize,
    "evolve": cmd_evolve,
    "language": cmd_language,
    "measure": cmd_measure,
    "mixing-scan": cmd_mixing_scan,
    "nonmix-cert": cmd_nonmix_cert,
    "horizontal-check": cmd_horizontal_check,
    "hom-search": cmd_hom_search,
    "dual-homs": cmd_dual_homs,
    "aut": cmd_aut,
    "collinear": cmd_collinear,
    "factor": cmd_factor,
    "constants": cmd_constants,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="prime modulus")
    common.add_argument("--d", type=int, default=2, help="number of variables (last one is time)")
    common.add_argument("--phi", help="Phi for the shift X_d - Phi")
    common.add_argument("--psi", help="Phi of the target shift")
    common.add_argument("--poly", help="a polynomial (normalized to CA form where a shift is needed)")
    common.add_argument("--r", help="multiplier R")
    common.add_argument("--shape", help='exponent vectors, e.g. "(0,0);(1,0)"')
    common.add_argument("--values", help="comma-separated cell values")
    common.add_argument("--row", default="1", help="top row for evolve, e.g. 1 or 1,0,1")
    common.add_argument("--steps", type=int, default=16)
    common.add_argument("--mode", choices=["zero", "cone"], default="zero")
    common.add_argument("--dilations", help='e.g. "2,4,8"')
    common.add_argument("--jmax", type=int, default=6)
    common.add_argument("--mmax", type=int, default=64)
    common.add_argument("--budget", type=int, default=DEFAULT_RULE_BUDGET)
    common.add_argument("--method", choices=["exhaustive", "linear"], default="exhaustive")
    common.add_argument("--hint", action="append", help="factor hint POLY:EXP (repeatable)")
    common.add_argument("--hint-unit", type=int, default=1)
    common.add_argument("--hint-monomial", help="monomial exponent of the hint, e.g. 0,0")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["json", "text", "pgm"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="cashift", description="Linear cellular automaton shifts over F_p.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _emit(payload: bytes, out: Optional[str]) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    try:
        result, code = COMMANDS[args.command](args)
    except (UsageError, ParseError, NotCAFormError, BudgetError, ValueError) as exc:
        print(f"cashift {args.command}: {exc}", file=sys.stderr)
        return 2
    except TheoremViolation as exc:
        print(f"cashift {args.command}: {exc}", file=sys.stderr)
        return 1
    if isinstance(result, bytes):
        payload = result
    else:
        report = {"command": args.command, "config": config, "result": result, "version": __version__}
        payload = (json.dumps(report, sort_keys=True, indent=2) + "\n").encode()
    _emit(payload, args.out)
    return code


def main() -> None:
    sys.exit(run())
