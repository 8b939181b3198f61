"""Command-line front end: ``wkmoduli {check,trace,figures,elliptic}``.

Exit codes: 0 success, 1 domain error (or not flat), 2 off-variety,
64 usage error, 73 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence


from .elliptic import EllipticPoint, identity_residuals, lm_from_z
from .errors import GeometryError, ScalarFlat
from .export import DEFAULT_GRID, branch_to_csv, write_figures
from .moduli import ModuliPoint, q_poly, trace_branch
from .space import ModuliParams, ricci_from_params
from .spin import curvature_omega, homothety_invariant, integrability_residuals, verify_einstein_from_wk, wk_number

EXIT_OK, EXIT_DOMAIN, EXIT_OFF_VARIETY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 64, 73

# six-digit inputs such as "1 -0.309017 1" are off the curve by ~1e-8
CLI_TOL = 1e-6
PSI0 = (1.0, 0.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _real(s: str) -> float:
    try:
        x = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {s!r}")
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {s!r}")
    return x


def _complex(s: str) -> complex:
    try:
        z = complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"not finite: {s!r}")
    return z


def _positive_int(s: str) -> int:
    try:
        n = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if n < 2:
        raise argparse.ArgumentTypeError("need at least 2 samples")
    return n


# --- check ------------------------------------------------------------------

def check_report(K: float, L: float, M: float, tol: float = CLI_TOL) -> tuple[dict, int]:
    """The CheckReport as a JSON-ready dict, together with the exit code."""
    p = ModuliParams(K, L, M)
    r = ricci_from_params(p)
    pt = ModuliPoint.at(p)
    report = {
        "schema": 1,
        "params": {"K": K, "L": L, "M": M},
        "ricci": {"A": r.A, "B": r.B, "C": r.C, "S": r.S},
        "q": pt.q_residual,
        "on_variety": pt.on_variety(tol),
        "tol": tol,
        "lambda": None,
        "error": None,
        "residuals": None,
        "curvature_max_norm": None,
        "flat": None,
        "einstein_residual": None,
        "invariant": None,
    }
    try:
        if r.S == 0.0:
            raise ScalarFlat(f"S = 0 at {(K, L, M)}")
        lam = wk_number(p)
        report["lambda"] = lam.lam
        res = integrability_residuals(p, lam)
        report["residuals"] = {"r1": res.r1, "r2": res.r2, "r3": list(res.r3)}
        curv = curvature_omega(p, lam, rel_tol=tol)
        report["curvature_max_norm"] = curv.max_norm
        report["flat"] = curv.flat
        report["einstein_residual"] = verify_einstein_from_wk(p, lam, PSI0).residual
        report["invariant"] = homothety_invariant(p, lam)
    except GeometryError as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
    if isinstance(report["error"], str) and report["error"].startswith("ScalarFlat"):
        return report, EXIT_DOMAIN
    if not report["on_variety"]:
        return report, EXIT_OFF_VARIETY
    if report["error"] or not report["flat"]:
        return report, EXIT_DOMAIN
    return report, EXIT_OK


def _print_text(report: dict, out) -> None:
    p, r = report["params"], report["ricci"]
    print(f"params      K={p['K']:.17g} L={p['L']:.17g} M={p['M']:.17g}", file=out)
    print(f"ricci       A={r['A']:.12g} B={r['B']:.12g} C={r['C']:.12g} S={r['S']:.12g}", file=out)
    print(f"Q           {report['q']:.6g}", file=out)
    print(f"on_variety  {str(report['on_variety']).lower()}", file=out)
    if report["error"]:
        print(f"error       {report['error']}", file=out)
    for key in ("lambda", "flat", "curvature_max_norm", "einstein_residual", "invariant"):
        v = report[key]
        if v is None:
            continue
        if isinstance(v, bool):
            v = str(v).lower()
        elif isinstance(v, float):
            v = f"{v:.12g}"
        print(f"{key:<11} {v}", file=out)
    if report["residuals"]:
        res = report["residuals"]
        r3 = ", ".join(f"{x:.3g}" for x in res["r3"])
        print(f"residuals   r1={res['r1']:.3g} r2={res['r2']:.3g} r3=({r3})", file=out)


def cmd_check(args, out) -> int:
    report, code = check_report(args.K, args.L, args.M, args.tol)
    if args.json:
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        _print_text(report, out)
    return code


# --- trace ------------------------------------------------------------------

def _resolve(positional, flag, default, name):
    if positional is not None and flag is not None and positional != flag:
        raise UsageError(f"conflicting values for {name}: {positional} and {flag}")
    for v in (positional, flag):
        if v is not None:
            return v
    return default


def cmd_trace(args, out) -> int:
    branch = _resolve(args.branch_pos, args.branch, None, "branch")
    if branch is None:
        raise UsageError("a branch (plus or minus) is required")
    if branch not in ("plus", "minus"):
        raise UsageError(f"unknown branch {branch!r}")
    m_min = _resolve(args.m_min_pos, args.m_min, 0.1, "m-min")
    m_max = _resolve(args.m_max_pos, args.m_max, 10.0, "m-max")
    n = _resolve(args.n_pos, args.samples, 200, "samples")
    if not (0.0 <= m_min < m_max):
        raise UsageError("need 0 <= m_min < m_max")
    text = branch_to_csv(trace_branch(m_min, m_max, n, branch))
    if args.out is None:
        out.write(text)
        return EXIT_OK
    try:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"wkmoduli: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# --- figures ----------------------------------------------------------------

def cmd_figures(args, out) -> int:
    out_dir = _resolve(args.out_dir, args.out, None, "output directory")
    if out_dir is None:
        raise UsageError("an output directory is required")
    m_min = args.m_min if args.m_min is not None else DEFAULT_GRID[0]
    m_max = args.m_max if args.m_max is not None else DEFAULT_GRID[1]
    n = args.samples if args.samples is not None else DEFAULT_GRID[2]
    if not (0.0 <= m_min < m_max):
        raise UsageError("need 0 <= m_min < m_max")
    try:
        paths = write_figures(out_dir, m_min, m_max, n, svg=args.svg)
    except OSError as exc:
        print(f"wkmoduli: cannot write to {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in paths:
        print(path, file=out)
    return EXIT_OK


# --- elliptic ---------------------------------------------------------------

def _cpair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def cmd_elliptic(args, out) -> int:
    z = _resolve(args.z_pos, args.z, None, "z")
    if z is None:
        raise UsageError("a complex point z is required")
    args.z = z
    pt = EllipticPoint(z, args.sheet)
    try:
        lm = lm_from_z(pt)
    except GeometryError as exc:
        json.dump({"schema": 1, "z": _cpair(args.z), "sheet": args.sheet,
                   "error": f"{type(exc).__name__}: {exc}"}, out, indent=2)
        out.write("\n")
        return EXIT_DOMAIN
    d_res, p_res = identity_residuals(pt)
    report = {
        "schema": 1,
        "z": _cpair(pt.z),
        "sheet": pt.sheet,
        "w": _cpair(pt.w),
        "L": _cpair(lm.L),
        "M": _cpair(lm.M),
        "q_residual": lm.q_residual,
        "q": _cpair(q_poly(1.0, lm.L, lm.M)),
        "identity_residuals": {"L-M": d_res, "L*M": p_res},
    }
    json.dump(report, out, indent=2)
    out.write("\n")
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wkmoduli", description="Einstein-Dirac moduli of N^3(K, L, M).")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("check", help="certify a single parameter triple")
    for name in ("K", "L", "M"):
        c.add_argument(name, type=_real)
    c.add_argument("--json", action="store_true", help="print the report as JSON")
    c.add_argument("--tol", type=_real, default=CLI_TOL,
                   help=f"relative tolerance for on-variety and flatness (default {CLI_TOL:g})")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("trace", help="sample one branch of the moduli curve as CSV")
    t.add_argument("branch_pos", nargs="?", metavar="branch")
    t.add_argument("m_min_pos", nargs="?", type=_real, metavar="m_min")
    t.add_argument("m_max_pos", nargs="?", type=_real, metavar="m_max")
    t.add_argument("n_pos", nargs="?", type=_positive_int, metavar="n")
    t.add_argument("--branch", choices=("plus", "minus"))
    t.add_argument("--m-min", type=_real)
    t.add_argument("--m-max", type=_real)
    t.add_argument("--samples", type=_positive_int)
    t.add_argument("--out", help="output CSV path (default: stdout)")
    t.set_defaults(func=cmd_trace)

    f = sub.add_parser("figures", help="write the six figure CSV files")
    f.add_argument("out_dir", nargs="?")
    f.add_argument("--out", help="output directory (alternative to the positional)")
    f.add_argument("--m-min", type=_real)
    f.add_argument("--m-max", type=_real)
    f.add_argument("--samples", type=_positive_int)
    f.add_argument("--svg", action="store_true", help="also render SVG line plots")
    f.set_defaults(func=cmd_figures)

    e = sub.add_parser("elliptic", help="evaluate (L, M) at a point z of the elliptic curve")
    e.add_argument("z_pos", nargs="?", type=_complex, metavar="z", help="complex z, e.g. 0.5+0.2j")
    e.add_argument("--z", type=_complex, help="same as the positional z")
    e.add_argument("--sheet", type=int, choices=(1, -1), default=1)
    e.set_defaults(func=cmd_elliptic)
    return parser


def _protect_complex(argv: list[str]) -> list[str]:
    """argparse takes "-1.5+0.2j" for an option; pass such values as --z=..."""
    if not argv or argv[0] != "elliptic":
        return argv
    out = [argv[0]]
    for prev, tok in zip(argv, argv[1:]):
        if tok.startswith("-") and prev != "--sheet" and not tok.startswith("--"):
            try:
                _complex(tok)
            except argparse.ArgumentTypeError:
                pass
            else:
                tok = f"--z={tok}"
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_protect_complex(argv))
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"wkmoduli: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, GeometryError) as exc:
        print(f"wkmoduli: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
