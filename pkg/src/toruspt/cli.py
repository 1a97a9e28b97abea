"""Command-line front end.

Subcommands: potential, spectrum, wavefunction, verify, algebra (an alias of
spectrum --case iso21) and errata.  Outputs are deterministic: floats are
rendered with 17 significant digits, CSV uses '.' decimals, comma delimiters
and LF line endings with a header row, and JSON key order is fixed, so a
rerun with the same configuration produces byte-identical files.

Exit codes: 0 success, 1 verification or domain failure, 2 argument error.
Flags override an optional key=value config file; unknown config keys are
errors.  The only environment variable consulted is TORUSPT_OUTDIR, an
optional prefix for relative output paths.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings

import numpy as np

from . import errata as errata_mod
from . import iso21, oracle, susy, verify
from .errors import TorusPTError
from .geometry import TorusGeometry, prefactor_f

CASES = ("pt", "rational", "beta", "appell", "component2", "iso21")
MAX_LEVELS = 8


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_render(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_json_render(v, indent + 1)}' for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad}  {_json_render(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return _fmt(obj)


def _write_output(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    outdir = os.environ.get("TORUSPT_OUTDIR")
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    with open(path, "w", newline="") as handle:
        handle.write(text)


def _csv_table(header, columns) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


class CLIError(Exception):
    """Bad arguments detected after parsing (exit code 2)."""


def _load_config(path: str, known: set) -> dict:
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CLIError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in known:
                raise CLIError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val.strip()
    return values


_FLOAT_KEYS = ("A", "B", "lam", "C1", "a", "c", "k", "B1", "mu", "K1",
               "x_lo", "x_hi", "rel_tol", "abs_tol")
_INT_KEYS = ("n_points", "levels", "n")
_STR_KEYS = ("case", "branch", "format", "output", "suite")


def _apply_config(args, parser_name) -> None:
    if not getattr(args, "config", None):
        return
    known = {k for k in _FLOAT_KEYS + _INT_KEYS + _STR_KEYS if hasattr(args, k)}
    values = _load_config(args.config, known)
    for key, raw in values.items():
        if getattr(args, f"_seen_{key}", False):
            continue  # explicit flag wins
        if key in _FLOAT_KEYS:
            setattr(args, key, float(raw))
        elif key in _INT_KEYS:
            setattr(args, key, int(raw))
        else:
            setattr(args, key, raw)


class _Tracking(argparse.Action):
    """Store the value and remember that the flag was given explicitly."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"_seen_{self.dest}", True)


def _add_common(p):
    p.add_argument("--config", help="key=value file; explicit flags override")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   action=_Tracking)
    p.add_argument("--output", default="-", action=_Tracking,
                   help="output path ('-' for stdout)")


def _add_params(p, case_required=True):
    if case_required:
        p.add_argument("--case", choices=CASES, required=True, action=_Tracking)
    else:
        p.add_argument("--case", choices=CASES, default="iso21", action=_Tracking)
    for name in ("A", "B", "a", "c", "k", "B1", "mu", "K1", "C1"):
        p.add_argument(f"--{name}", type=float, dest=name, action=_Tracking)
    p.add_argument("--lambda", type=float, dest="lam", action=_Tracking)
    p.add_argument("--branch", choices=("+", "-"), action=_Tracking)
    p.add_argument("--x-lo", type=float, dest="x_lo", default=0.002,
                   action=_Tracking)
    p.add_argument("--x-hi", type=float, dest="x_hi", default=math.pi - 0.002,
                   action=_Tracking)
    p.add_argument("--n-points", type=int, dest="n_points", default=2001,
                   action=_Tracking)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise CLIError(f"case {args.case!r} requires --" + ", --".join(missing))


def _family_from_args(args):
    """Build the superpotential family named by --case."""
    case = args.case
    if case == "pt":
        _need(args, "A", "B")
        return susy.PureTrigPT(args.A, args.B)
    if case == "rational":
        if args.A is not None or args.lam is not None or args.c is not None:
            _need(args, "A", "B", "lam", "a", "c")
            return susy.RationalSin(args.A, args.B, args.lam,
                                    TorusGeometry(args.a, args.c))
        _need(args, "a", "B", "branch")
        return susy.solve_parameter_conditions(
            "equal_radii", a=args.a, B=args.B, branch=args.branch)
    if case == "beta":
        _need(args, "A", "B", "a", "c")
        return susy.BetaTail(args.A, args.B,
                             args.C1 if args.C1 is not None else 1.0,
                             TorusGeometry(args.a, args.c))
    if case == "appell":
        _need(args, "a", "lam", "branch")
        return susy.solve_parameter_conditions(
            "appell", a=args.a, lam=args.lam, branch=args.branch,
            C1=args.C1 if args.C1 is not None else -1.0)
    if case == "component2":
        _need(args, "a", "B", "branch")
        solved = susy.solve_parameter_conditions(
            "equal_radii", a=args.a, B=args.B, branch=args.branch)
        # the second component is the mirrored sin-tail family
        return susy.RationalSin(solved.A, -solved.B, solved.lam,
                                TorusGeometry(solved.geom.a, -solved.geom.c))
    raise CLIError(f"case {case!r} not handled here")


def _algebra_from_args(args):
    _need(args, "B1", "mu", "a")
    k1 = args.K1 if args.K1 is not None else 0.0
    c = args.c if args.c is not None else args.a
    geom = TorusGeometry(args.a, c)
    return iso21.AlgebraParams(B1=args.B1, mu=args.mu, K1=k1,
                               K2=-k1 - 2.0 * c, geom=geom, mu1=args.mu + 1.0)


def _params_dict(args, keys):
    out = {}
    for key in keys:
        val = getattr(args, key, None)
        if val is not None:
            out[key if key != "lam" else "lambda"] = val
    return out


def _warn_regime(spec):
    if hasattr(spec, "normalizable") and not spec.normalizable:
        print("warning: non-normalizable regime (A >= -|B|); values are formal",
              file=sys.stderr)


def _grid_points(args):
    if not (0.0 < args.x_lo < args.x_hi < math.pi):
        raise CLIError("grid must satisfy 0 < x_lo < x_hi < pi")
    if args.n_points < 64:
        raise CLIError("n_points must be at least 64")
    return np.linspace(args.x_lo, args.x_hi, args.n_points)


def cmd_potential(args) -> int:
    xs = _grid_points(args)
    if args.case == "iso21":
        p = _algebra_from_args(args)
        mapped = susy.RationalSin(A=-p.mu - 0.5, B=-p.B1, lam=-p.K1, geom=p.geom)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vm, vp = susy.partner_potentials(mapped, xs)
        vcas = iso21.casimir_potential(p, xs)
        header = ["x", "V_minus", "V_plus", "V_casimir"]
        cols = [xs, vm, vp, vcas]
    else:
        spec = _family_from_args(args)
        _warn_regime(spec)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vm, vp = susy.partner_potentials(spec, xs)
        header = ["x", "V_minus", "V_plus"]
        cols = [xs, vm, vp]
    if args.format == "csv":
        _write_output(_csv_table(header, cols), args.output)
    else:
        rows = [{h: c[i] for h, c in zip(header, cols)} for i in range(xs.size)]
        _write_output(_json_render({"case": args.case, "rows": rows}) + "\n",
                      args.output)
    return 0


def _spectrum_inputs(args):
    """(eps list, potential samples, params dict) for the oracle comparison."""
    grid = oracle.Grid1D(args.x_lo, args.x_hi, args.n_points)
    x = grid.points
    if args.case == "iso21":
        p = _algebra_from_args(args)
        eps = [iso21.algebra_spectrum(p, n)[0] for n in range(args.levels)]
        shift = (p.mu + 0.5) ** 2 - 0.25
        v = iso21.casimir_potential(p, x) - shift
        return eps, v, grid, _params_dict(args, ("B1", "mu", "K1", "a", "c"))
    spec = _family_from_args(args)
    _warn_regime(spec)
    formula = susy.spectrum_formula(spec)
    eps = [formula.eps(n) for n in range(args.levels)]
    if args.case == "component2":
        v = susy.pt_coefficients(spec, "minus")(x)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            v, _ = susy.partner_potentials(spec, x)
    keys = ("A", "B", "lam", "C1", "a", "c", "branch")
    params = _params_dict(args, keys)
    params.update({"A_solved": spec.A, "B_solved": spec.B})
    return eps, v, grid, params


def cmd_spectrum(args) -> int:
    if not 1 <= args.levels <= MAX_LEVELS:
        raise CLIError(f"levels out of supported range 1..{MAX_LEVELS}")
    eps, v, grid, params = _spectrum_inputs(args)
    report = oracle.spectrum_report(args.case, params, eps, v, grid,
                                    rel_tol=args.rel_tol, abs_tol=args.abs_tol)
    _write_output(_json_render(report.to_json_obj()) + "\n", args.output)
    return 0 if report.passed else 1


def _normalized(vals, xs):
    norm = math.sqrt(np.trapezoid(vals * vals, xs))
    return vals / norm if norm > 0.0 else vals


def cmd_wavefunction(args) -> int:
    if args.n < 0:
        raise CLIError("level n must be non-negative")
    xs = _grid_points(args)
    notes = {}
    if args.case == "component2":
        solved = susy.solve_parameter_conditions(
            "equal_radii", a=args.a, B=args.B, branch=args.branch) \
            if args.A is None else None
        if solved is None:
            raise CLIError("component2 case takes --a, --B, --branch")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            bare = lambda x: susy.spinor_psi2(solved.geom, solved.lam, args.n, x,
                                              normalized=False)
            psi2 = bare(xs)
            normalizable = susy.integrability_probe(bare, "left") and \
                susy.integrability_probe(bare, "right")
        notes["normalizable"] = normalizable
        notes["warnings"] = sorted({type(w.message).__name__ for w in caught})
        header = ["x", "psi2"]
        cols = [xs, _normalized(psi2, xs)]
    else:
        spec = _family_from_args(args)
        _warn_regime(spec)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fm = susy.eigenfunction_minus(spec.A, spec.B, args.n, xs, warn=False)
            geom = spec.geom if hasattr(spec, "geom") else TorusGeometry(1.0, 1.0)
            psi1 = prefactor_f(geom, xs) * fm
        header = ["x", "F_minus", "psi1"]
        cols = [xs, _normalized(fm, xs), _normalized(psi1, xs)]
        if args.with_plus:
            if args.n < 1:
                raise CLIError("--with-plus needs n >= 1")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                fp = susy.eigenfunction_plus(spec, args.n, xs)
            header.append("F_plus")
            cols.append(_normalized(fp, xs))
    if args.format == "csv":
        for key, val in notes.items():
            print(f"note: {key} = {val}", file=sys.stderr)
        _write_output(_csv_table(header, cols), args.output)
    else:
        rows = [{h: c[i] for h, c in zip(header, cols)} for i in range(xs.size)]
        obj = {"case": args.case, "n": args.n, **notes, "rows": rows}
        _write_output(_json_render(obj) + "\n", args.output)
    return 0


def cmd_verify(args) -> int:
    report = verify.run_suite(args.suite)
    if args.format == "json":
        _write_output(_json_render(report.to_json_obj()) + "\n", args.output)
    else:
        _write_output(report.render_text() + "\n", args.output)
    return 0 if report.passed else 1


def cmd_errata(args) -> int:
    _write_output(errata_mod.render_text(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruspt",
        description="Solvable and rationally extended trigonometric "
                    "Poschl-Teller families on a torus surface, with an "
                    "independent finite-difference verification oracle.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_pot = sub.add_parser("potential", help="sample partner potentials on a grid")
    _add_params(p_pot)
    _add_common(p_pot)
    p_pot.set_defaults(fn=cmd_potential)

    for name in ("spectrum", "algebra"):
        p_spec = sub.add_parser(
            name, help="compare the closed-form spectrum against the oracle"
                       + (" (alias of spectrum --case iso21)" if name == "algebra"
                          else ""))
        _add_params(p_spec, case_required=(name == "spectrum"))
        p_spec.add_argument("--levels", type=int, default=5, action=_Tracking)
        p_spec.add_argument("--rel-tol", type=float, dest="rel_tol", default=5e-3,
                            action=_Tracking)
        p_spec.add_argument("--abs-tol", type=float, dest="abs_tol", default=0.01,
                            action=_Tracking)
        p_spec.set_defaults(fn=cmd_spectrum, n_points=4000)

    p_wf = sub.add_parser("wavefunction", help="sample eigenfunctions and spinors")
    _add_params(p_wf)
    p_wf.add_argument("--n", type=int, default=0, action=_Tracking)
    p_wf.add_argument("--with-plus", action="store_true", dest="with_plus")
    _add_common(p_wf)
    p_wf.set_defaults(fn=cmd_wavefunction)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--suite", default="all",
                       choices=("all",) + verify.SUITES, action=_Tracking)
    _add_common(p_ver)
    p_ver.set_defaults(fn=cmd_verify)

    p_err = sub.add_parser("errata", help="print the machine-checked errata")
    _add_common(p_err)
    p_err.set_defaults(fn=cmd_errata)

    for p in (sub.choices["spectrum"], sub.choices["algebra"]):
        _add_common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, args.command)
        if args.command == "algebra":
            args.case = "iso21"
        return args.fn(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TorusPTError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
