"""Named verification checks grouped into suites.

Each check measures one invariant (special-function oracle agreement, SUSY
identities, oracle spectra, algebra closure, ...) and reports a measured
value against a fixed tolerance.  Checks are pure and independent of one
another; shared heavy artifacts (eigensolves) are computed once per run and
cached on the context object.  Output rows are emitted in registration
order, so two runs of the same suite produce identical reports.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, trapezoid

from . import geometry, iso21, oracle, susy
from .geometry import ModeParams, TorusGeometry
from .special import JacobiParams, appell_f1, incomplete_beta, jacobi_poly, \
    numeric_derivative

__all__ = ["CheckResult", "VerifyReport", "run_suite", "SUITES", "CHECKS"]

PT_A, PT_B = -2.0, 0.5  # reference solvable family used throughout


@dataclass
class CheckResult:
    name: str
    suite: str
    passed: bool
    measured: float | None
    tolerance: float | None
    detail: str = ""
    info: bool = False

    @property
    def status(self) -> str:
        if self.info:
            return "INFO"
        return "PASS" if self.passed else "FAIL"


@dataclass
class VerifyReport:
    suite: str
    results: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.info)

    def render_text(self) -> str:
        lines = []
        for r in self.results:
            meas = "-" if r.measured is None else f"{r.measured:.3e}"
            tol = "-" if r.tolerance is None else f"{r.tolerance:.1e}"
            lines.append(f"{r.status:4s} {r.suite}/{r.name}: measured={meas} "
                         f"tol={tol}  {r.detail}".rstrip())
        n_fail = sum(1 for r in self.results if not r.info and not r.passed)
        lines.append(f"suite={self.suite}: {len(self.results)} checks, "
                     f"{n_fail} failures ({self.elapsed:.1f} s)")
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "suite": self.suite,
            "checks": [
                {"name": r.name, "suite": r.suite, "status": r.status,
                 "measured": r.measured, "tolerance": r.tolerance,
                 "detail": r.detail}
                for r in self.results
            ],
            "pass": self.passed,
        }


class Context:
    """Lazy cache for artifacts shared between checks."""

    def __init__(self):
        self._cache = {}

    def get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    # -- shared fixtures ---------------------------------------------------

    def pt_spec(self):
        return susy.PureTrigPT(PT_A, PT_B)

    def pt_oracle_grid(self):
        return oracle.Grid1D(0.002, math.pi - 0.002, 4000)

    def pt_spectrum_run(self):
        def build():
            spec = self.pt_spec()
            grid = self.pt_oracle_grid()
            v = susy.pt_coefficients(spec, "minus")(grid.points)
            t0 = time.perf_counter()
            eps = oracle.solve_potential(v, grid, 5)
            return eps, time.perf_counter() - t0
        return self.get("pt_spectrum", build)

    def ladder_fixture(self):
        def build():
            spec = self.pt_spec()
            grid = oracle.Grid1D(0.05, math.pi - 0.05, 6001)
            x = grid.points
            vp = susy.pt_coefficients(spec, "plus")(x)
            vals, vecs = oracle.eigenpairs(oracle.build_hamiltonian(vp, grid), 3, grid)
            return grid, x, vals, vecs
        return self.get("ladder", build)


_REGISTRY: list = []


def _check(name, suite):
    def deco(fn):
        _REGISTRY.append((name, suite, fn))
        return fn
    return deco


def _result(name, suite, measured, tol, detail="", info=False, compare="le"):
    if info:
        ok = True
    elif compare == "le":
        ok = measured <= tol
    else:
        ok = measured >= tol
    return CheckResult(name=name, suite=suite, passed=ok, measured=measured,
                       tolerance=tol, detail=detail, info=info)


# --------------------------------------------------------------------------
# special functions
# --------------------------------------------------------------------------

@_check("jacobi_recurrence", "special")
def _jacobi_recurrence(ctx):
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 13))
        while True:
            a = rng.uniform(-3.0, 3.0)
            b = rng.uniform(-3.0, 3.0)
            s = a + b
            if abs(s - round(s)) > 1e-3 or round(s) > -2:
                break
        z = rng.uniform(-0.9, 0.9)
        p2 = jacobi_poly(JacobiParams(n, a, b), z)
        p1 = jacobi_poly(JacobiParams(n - 1, a, b), z)
        p0 = jacobi_poly(JacobiParams(n - 2, a, b), z)
        c1 = 2.0 * n * (n + a + b) * (2.0 * n + a + b - 2.0)
        c2 = (2.0 * n + a + b - 1.0) * (a * a - b * b)
        c3 = (2.0 * n + a + b - 2.0) * (2.0 * n + a + b - 1.0) * (2.0 * n + a + b)
        c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + a + b)
        scale = max(abs(c1 * p2), abs(c4 * p0), 1.0)
        worst = max(worst, abs(c1 * p2 - (c2 + c3 * z) * p1 + c4 * p0) / scale)
    return _result("jacobi_recurrence", "special", worst, 1e-12,
                   "three-term recurrence on 200 random draws")


@_check("beta_quadrature", "special")
def _beta_quadrature(ctx):
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(100):
        z = rng.uniform(0.05, 0.95)
        s = rng.uniform(0.15, 4.0)
        w = rng.uniform(-2.5, 4.0)
        mine = incomplete_beta(z, s, w)
        ref = quad(lambda u: u ** (s - 1.0) * (1.0 - u) ** (w - 1.0), 0.0, z,
                   epsabs=1e-14, epsrel=1e-13, limit=400)[0]
        worst = max(worst, abs(mine - ref) / max(1.0, abs(ref)))
    return _result("beta_quadrature", "special", worst, 1e-10,
                   "100 random triples vs adaptive quadrature")


@_check("beta_monotone", "special")
def _beta_monotone(ctx):
    zs = np.linspace(0.02, 0.98, 97)
    worst = 0.0
    for (s, w) in ((0.5, 0.5), (2.0, 3.0), (1.2, 0.4)):
        vals = incomplete_beta(zs, s, w)
        worst = max(worst, -float(np.min(np.diff(vals))))
    return _result("beta_monotone", "special", worst, 0.0,
                   "non-decreasing in z for s, w > 0", compare="le")


def _brute_f1(a, b1, b2, c, x, y, terms=160):
    # row-major summation with ratio-built terms (independent of the
    # diagonal-sweep order used by the implementation)
    tot = 0.0
    row_head = 1.0  # T(m, 0)
    for m in range(terms):
        t = row_head
        tot += t
        for n in range(1, terms - m):
            t *= (a + m + n - 1.0) * (b2 + n - 1.0) * y / ((c + m + n - 1.0) * n)
            tot += t
        row_head *= (a + m) * (b1 + m) * x / ((c + m) * (m + 1.0))
    return tot


@_check("appell_brute", "special")
def _appell_brute(ctx):
    rng = np.random.default_rng(303)
    worst = 0.0
    for _ in range(25):
        a = rng.uniform(0.2, 2.0)
        b1 = rng.uniform(-1.5, 2.0)
        b2 = rng.uniform(-1.5, 2.0)
        c = rng.uniform(0.5, 3.5)
        x = rng.uniform(-0.6, 0.6)
        y = rng.uniform(-0.6, 0.6)
        mine = appell_f1(a, b1, b2, c, x, y)
        ref = _brute_f1(a, b1, b2, c, x, y)
        worst = max(worst, abs(mine - ref) / max(1.0, abs(ref)))
    return _result("appell_brute", "special", worst, 1e-9,
                   "25 random points vs brute-force double sum")


def _gauss_2f1(a, b, c, z, terms=600):
    t, s = 1.0, 1.0
    for k in range(1, terms):
        t *= (a + k - 1.0) * (b + k - 1.0) / ((c + k - 1.0) * k) * z
        s += t
        if abs(t) < 1e-17 * abs(s):
            break
    return s


@_check("appell_reduce_y0", "special")
def _appell_reduce_y0(ctx):
    worst = 0.0
    for (a, b1, b2, c, x) in ((0.5, 0.25, 1.5, 2.0, 0.4), (1.2, -0.7, 0.3, 2.5, -0.5),
                              (0.8, 1.1, 2.2, 3.0, 0.7)):
        worst = max(worst, abs(appell_f1(a, b1, b2, c, x, 0.0) - _gauss_2f1(a, b1, c, x)))
    return _result("appell_reduce_y0", "special", worst, 1e-10,
                   "y = 0 reduction to the Gauss series")


@_check("appell_reduce_xy", "special")
def _appell_reduce_xy(ctx):
    worst = 0.0
    for (a, b1, b2, c, x) in ((0.5, 0.25, 1.5, 2.0, 0.3), (1.2, -0.7, 0.3, 2.5, -0.4),
                              (0.8, 1.1, 2.2, 4.2, 0.55)):
        worst = max(worst,
                    abs(appell_f1(a, b1, b2, c, x, x) - _gauss_2f1(a, b1 + b2, c, x)))
    return _result("appell_reduce_xy", "special", worst, 1e-9,
                   "x = y reduction to the Gauss series")


@_check("appell_symmetry", "special")
def _appell_symmetry(ctx):
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(20):
        a = rng.uniform(0.2, 2.0)
        b1, b2 = rng.uniform(-1.0, 2.0, 2)
        c = rng.uniform(0.5, 3.0)
        x, y = rng.uniform(-0.6, 0.6, 2)
        worst = max(worst, abs(appell_f1(a, b1, b2, c, x, y)
                               - appell_f1(a, b2, b1, c, y, x)))
    return _result("appell_symmetry", "special", worst, 1e-12,
                   "(b1,x) <-> (b2,y) exchange")


@_check("derivative_h2", "special")
def _derivative_h2(ctx):
    ratios = []
    for (f, df, x0) in ((np.cos, lambda u: -math.sin(u), math.pi / 3),
                        (np.tanh, lambda u: 1.0 - math.tanh(u) ** 2, 0.4)):
        e1 = abs(numeric_derivative(f, x0, 1, 1e-3) - df(x0))
        e2 = abs(numeric_derivative(f, x0, 1, 5e-4) - df(x0))
        ratios.append(e1 / e2)
    worst = min(ratios)
    detail = "halving h: error ratios " + ", ".join(f"{r:.2f}" for r in ratios)
    ok = all(3.0 <= r <= 5.0 for r in ratios)
    return CheckResult("derivative_h2", "special", ok, worst, 4.0, detail)


# --------------------------------------------------------------------------
# geometry
# --------------------------------------------------------------------------

@_check("spin_connection_identity", "geometry")
def _spin_identity(ctx):
    rng = np.random.default_rng(505)
    xs = rng.uniform(0.05, math.pi - 0.05, 200)
    worst = 0.0
    for (a, c) in ((1.0, 1.0), (1.0, 2.0), (2.0, -3.0)):
        g = TorusGeometry(a, c)
        s = geometry.spin_connection_coeff(g, xs)
        _, g2 = geometry.christoffel(g, xs)
        worst = max(worst, float(np.max(np.abs(s - 0.5 * g2))))
    return _result("spin_connection_identity", "geometry", worst, 1e-15,
                   "s(x) = Gamma^2_12 / 2 on random grids")


@_check("christoffel_odd", "geometry")
def _christoffel_odd(ctx):
    xs = np.linspace(0.1, 1.5, 57)
    g = TorusGeometry(1.3, 2.1)
    f1, f2 = geometry.christoffel(g, xs)
    m1, m2 = geometry.christoffel(g, -xs)
    worst = float(max(np.max(np.abs(f1 + m1)), np.max(np.abs(f2 + m2))))
    return _result("christoffel_odd", "geometry", worst, 1e-14,
                   "componentwise odd in x")


def _roundtrip(component, n_points, h0):
    g = TorusGeometry(1.0, 1.0)
    target = susy.pt_coefficients(susy.PureTrigPT(PT_A, PT_B), "minus")
    xs = np.linspace(0.3, 2.4, n_points)
    mode = ModeParams(1.0, component)
    tr = geometry.solve_g_transform(g, mode, target, xs, h0=h0)
    got = geometry.reduced_potential_grid(g, mode, tr)
    want = target(xs[1:-1])
    return float(np.max(np.abs(got - want)))


@_check("roundtrip_component1", "geometry")
def _roundtrip_c1(ctx):
    return _result("roundtrip_component1", "geometry", _roundtrip(1, 4001, 0.1),
                   1e-6, "transform then reduced potential, k=1, a=c=1")


@_check("roundtrip_component2", "geometry")
def _roundtrip_c2(ctx):
    return _result("roundtrip_component2", "geometry", _roundtrip(2, 6001, 0.3),
                   1e-6, "second component, sign-flipped reduction")


@_check("u1_eq_u2_at_k0", "geometry")
def _u1u2k0(ctx):
    g = TorusGeometry(1.0, 2.0)
    xs = np.linspace(0.2, math.pi - 0.2, 301)
    vf = lambda x: np.ones_like(np.asarray(x, dtype=float))
    vfp = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    u1 = geometry.effective_coefficients(g, ModeParams(0.0, 1), xs, vf, vfp)
    u2 = geometry.effective_coefficients(g, ModeParams(0.0, 2), xs, vf, vfp)
    worst = float(np.max(np.abs(u1 - u2)))
    return _result("u1_eq_u2_at_k0", "geometry", worst, 1e-12,
                   "k = 0 and V_F' = 0 collapse the two components")


@_check("prefactor_identity", "geometry")
def _prefactor_identity(ctx):
    g = TorusGeometry(1.0, 1.0)
    target = susy.PTCoefficients(0.0, 0.0, 0.0)
    xs = np.linspace(0.3, 2.4, 501)
    tr = geometry.solve_g_transform(g, ModeParams(0.0, 1), target, xs, h0=0.7)
    r = g.c + g.a * np.cos(xs)
    ident = tr.prefactor * np.sqrt(tr.g_prime * tr.fermi_velocity) * np.exp(g.a / (2.0 * r))
    worst = float(np.max(np.abs(ident - 1.0)))
    return _result("prefactor_identity", "geometry", worst, 1e-12,
                   "f sqrt(g' V_F) e^{a/2R} = 1 by construction")


# --------------------------------------------------------------------------
# susy
# --------------------------------------------------------------------------

@_check("identity_pt_analytic", "susy")
def _identity_pt(ctx):
    xs = np.linspace(0.05, math.pi - 0.05, 2001)
    rm, rp = susy.susy_residual(ctx.pt_spec(), xs, "analytic")
    return _result("identity_pt_analytic", "susy", max(rm, rp), 1e-9,
                   "V-+ = W^2 -+ W' with closed-form W'")


def _fd_grid():
    return np.linspace(0.15, math.pi - 0.25, 1501)


@_check("identity_rational_fd", "susy")
def _identity_rational(ctx):
    spec = susy.solve_parameter_conditions("equal_radii", a=2.0, B=-1.5, branch="-")
    rm, rp = susy.susy_residual(spec, _fd_grid(), "fd")
    return _result("identity_rational_fd", "susy", max(rm, rp), 1e-6,
                   "sin-tail family, central-difference W'")


@_check("identity_beta_fd", "susy")
def _identity_beta(ctx):
    spec = susy.BetaTail(1.0, 0.25, 1.0, TorusGeometry(1.0, 1.5))
    rm, rp = susy.susy_residual(spec, _fd_grid(), "fd")
    return _result("identity_beta_fd", "susy", max(rm, rp), 1e-6,
                   "beta-tail family (exercises the incomplete beta)")


@_check("identity_appell_fd", "susy")
def _identity_appell(ctx):
    spec = susy.solve_parameter_conditions("appell", a=1.0, lam=2.0, branch="+",
                                           C1=-1.0)
    xs = np.linspace(0.15, 2.0, 801)
    rm, rp = susy.susy_residual(spec, xs, "fd")
    return _result("identity_appell_fd", "susy", max(rm, rp), 1e-6,
                   "two-variable-series tail family")


@_check("cancellation_rational", "susy")
def _cancellation_rational(ctx):
    worst = 0.0
    xs = np.linspace(0.1, math.pi - 0.1, 2001)
    for (a, b, br) in ((2.0, -1.5, "-"), (1.0, 0.5, "+"), (1.0, 0.25, "-")):
        spec = susy.solve_parameter_conditions("equal_radii", a=a, B=b, branch=br)
        vm, _ = susy.partner_potentials(spec, xs)
        pt = susy.pt_coefficients(spec, "minus")(xs)
        worst = max(worst, float(np.max(np.abs(vm - pt))))
    return _result("cancellation_rational", "susy", worst, 1e-10,
                   "rational part of V- vanishes under the solved conditions")


@_check("appell_g_functional", "susy")
def _appell_g_functional(ctx):
    spec = susy.solve_parameter_conditions("appell", a=1.0, lam=2.0, branch="+",
                                           C1=-1.0)
    A, B, lam = spec.A, spec.B, spec.lam
    a, c = spec.geom.a, spec.geom.c
    xs = np.linspace(0.15, 2.0, 801)

    def g_of(x):
        w = susy.superpotential_eval(spec, x)
        core = (A * np.cos(x) + B) / np.sin(x)
        p = c + a * np.cos(x)
        return (w - core) * p - lam * np.sin(x)

    h = 3e-5
    gv = g_of(xs)
    gp = (g_of(xs + h) - g_of(xs - h)) / (2.0 * h)
    p = c + a * np.cos(xs)
    q = ((4.0 * a * B + 4.0 * A * c) * np.cos(xs) / np.sin(xs)
         + 4.0 * a * A * np.cos(xs) ** 2 / np.sin(xs)
         + 4.0 * B * c / np.sin(xs) + (4.0 * lam - 2.0 * a) * np.sin(xs))
    cal_g = 2.0 * gv ** 2 + gv * q - 2.0 * p * gp
    worst = float(np.max(np.abs(cal_g)))
    return _result("appell_g_functional", "susy", worst, 1e-6,
                   "tail functional vanishes for the series-built G")


@_check("spectrum_pt_oracle", "susy")
def _spectrum_pt(ctx):
    eps, elapsed = ctx.pt_spectrum_run()
    expect = [n * (n + 4.0) for n in range(5)]
    abs0 = abs(eps[0])
    rel = max(abs(eps[n] / expect[n] - 1.0) for n in range(1, 5))
    ok = abs0 < 0.01 and rel < 5e-3 and elapsed < 5.0
    detail = f"|eps0|={abs0:.2e}, max rel={rel:.2e}, {elapsed:.2f} s"
    return CheckResult("spectrum_pt_oracle", "susy", ok, rel, 5e-3, detail)


@_check("isospectral_pt", "susy")
def _isospectral_pt(ctx):
    spec = ctx.pt_spec()
    grid = oracle.Grid1D(0.002, math.pi - 0.002, 2000)
    x = grid.points
    rep = oracle.isospectral_check(susy.pt_coefficients(spec, "minus")(x),
                                   susy.pt_coefficients(spec, "plus")(x),
                                   grid, 4, tol=5e-3)
    return CheckResult("isospectral_pt", "susy", rep.passed, rep.max_rel_err,
                       5e-3, "spec(V+) vs spec(V-) shifted by one level")


@_check("spectrum_b_independence", "susy")
def _b_independence(ctx):
    grid = oracle.Grid1D(0.002, math.pi - 0.002, 2000)
    x = grid.points
    worst = 0.0
    for b in (0.0, 0.25, 0.5):
        spec = susy.PureTrigPT(PT_A, b)
        eps = oracle.solve_potential(susy.pt_coefficients(spec, "minus")(x), grid, 5)
        for n in range(1, 5):
            worst = max(worst, abs(eps[n] / (n * (n + 4.0)) - 1.0))
    return _result("spectrum_b_independence", "susy", worst, 5e-3,
                   "eps(n) = (n-A)^2 - A^2 for B in {0, 0.25, 0.5}")


@_check("eigenfunction_residual", "susy")
def _eigenfunction_residual(ctx):
    spec = ctx.pt_spec()
    xs = np.linspace(0.25, math.pi - 0.25, 2001)
    d = xs[1] - xs[0]
    v = susy.pt_coefficients(spec, "minus")(xs)
    worst = 0.0
    for n in range(5):
        f = susy.eigenfunction_minus(PT_A, PT_B, n, xs)
        fpp = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) \
            / (12.0 * d * d)
        eps = susy.analytic_spectrum(spec, n)
        resid = np.abs(-fpp + (v[2:-2] - eps) * f[2:-2])
        worst = max(worst, float(resid.max() / np.abs(f).max()))
    return _result("eigenfunction_residual", "susy", worst, 1e-6,
                   "Schroedinger substitution, n = 0..4")


@_check("eigenfunction_nodes", "susy")
def _eigenfunction_nodes(ctx):
    xs = np.linspace(0.002, math.pi - 0.002, 20001)
    bad = 0
    counts = []
    for n in range(5):
        f = susy.eigenfunction_minus(PT_A, PT_B, n, xs)
        k = int(np.sum(np.sign(f[1:]) * np.sign(f[:-1]) < 0))
        counts.append(k)
        bad += k != n
    return CheckResult("eigenfunction_nodes", "susy", bad == 0, float(bad), 0.0,
                       f"node counts {counts} for n = 0..4")


@_check("eigenfunction_orthogonality", "susy")
def _eigenfunction_orth(ctx):
    xs = np.linspace(0.002, math.pi - 0.002, 20001)
    fs = [susy.eigenfunction_minus(PT_A, PT_B, n, xs) for n in range(5)]
    norms = [math.sqrt(trapezoid(f * f, xs)) for f in fs]
    worst = 0.0
    for m in range(5):
        for n in range(m + 1, 5):
            ip = trapezoid(fs[m] * fs[n], xs) / (norms[m] * norms[n])
            worst = max(worst, abs(ip))
    return _result("eigenfunction_orthogonality", "susy", worst, 1e-6,
                   "pairwise overlaps, n <= 4")


@_check("ladder_annihilation", "susy")
def _ladder_annihilation(ctx):
    _, x, _, _ = ctx.ladder_fixture()
    spec = ctx.pt_spec()
    f0 = susy.eigenfunction_minus(PT_A, PT_B, 0, x)
    out = susy.ladder_apply(spec, f0, x, "lower")
    worst = float(np.max(np.abs(out)) / np.max(np.abs(f0)))
    return _result("ladder_annihilation", "susy", worst, 1e-6,
                   "lowering operator kills the ground state")


@_check("ladder_partner_cosine", "susy")
def _ladder_cosine(ctx):
    _, x, _, vecs = ctx.ladder_fixture()
    spec = ctx.pt_spec()
    worst = 0.0
    deficits = []
    for n in range(3):
        img = susy.ladder_apply(spec, susy.eigenfunction_minus(PT_A, PT_B, n + 1, x),
                                x, "lower")
        v = vecs[:, n]
        cos = abs(float(np.dot(img, v))) / (np.linalg.norm(img) * np.linalg.norm(v))
        deficits.append(1.0 - cos)
        worst = max(worst, 1.0 - cos)
    detail = "1-cos = " + ", ".join(f"{d:.1e}" for d in deficits)
    return _result("ladder_partner_cosine", "susy", worst, 1e-6, detail)


@_check("ladder_partner_cosine_ground", "susy")
def _ladder_cosine_ground(ctx):
    _, x, _, vecs = ctx.ladder_fixture()
    spec = ctx.pt_spec()
    img = susy.ladder_apply(spec, susy.eigenfunction_minus(PT_A, PT_B, 1, x), x,
                            "lower")
    v = vecs[:, 0]
    cos = abs(float(np.dot(img, v))) / (np.linalg.norm(img) * np.linalg.norm(v))
    return _result("ladder_partner_cosine_ground", "susy", 1.0 - cos, 1e-8,
                   "lowest partner level against the oracle eigenvector")


@_check("ladder_norm_ratio", "susy")
def _ladder_norm_ratio(ctx):
    _, x, _, _ = ctx.ladder_fixture()
    spec = ctx.pt_spec()
    worst = 0.0
    for n in range(3):
        f = susy.eigenfunction_minus(PT_A, PT_B, n + 1, x)
        img = susy.ladder_apply(spec, f, x, "lower")
        ratio = trapezoid(img * img, x) / trapezoid(f * f, x)
        eps = susy.analytic_spectrum(spec, n + 1)
        worst = max(worst, abs(ratio / eps - 1.0))
    return _result("ladder_norm_ratio", "susy", worst, 1e-4,
                   "||lowered||^2/||F||^2 = eps(n+1)")


@_check("partner_closed_form", "susy")
def _partner_closed_form(ctx):
    spec = susy.solve_parameter_conditions("equal_radii", a=2.0, B=-1.5, branch="-")
    xs = np.linspace(0.3, math.pi - 0.3, 3001)
    worst = 0.0
    for n in (1, 2):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fm = susy.eigenfunction_minus(spec.A, spec.B, n, xs)
        img = susy.ladder_apply(spec, fm, xs, "lower")
        closed = susy.eigenfunction_plus(spec, n, xs)
        cos = abs(float(np.dot(img, closed))) / (
            np.linalg.norm(img) * np.linalg.norm(closed))
        worst = max(worst, 1.0 - cos)
    return _result("partner_closed_form", "susy", worst, 1e-6,
                   "closed-form partner eigenfunction vs ladder image")


@_check("psi1_normalization", "susy")
def _psi1_normalization(ctx):
    spec = susy.solve_parameter_conditions("equal_radii", a=1.0, B=0.25, branch="-")
    xs = np.linspace(0.0, math.pi, 20001)[1:-1]  # the normalization convention grid
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        psi = susy.spinor_psi1(spec, 0, xs)
    err = abs(float(trapezoid(psi * psi, xs)) - 1.0)
    return _result("psi1_normalization", "susy", err, 1e-8,
                   "unit L2 norm under the fixed quadrature convention")


@_check("psi2_integrability", "susy")
def _psi2_integrability(ctx):
    spec = susy.solve_parameter_conditions("equal_radii", a=1.0, B=0.25, branch="-")

    def bare(xs):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return susy.spinor_psi2(spec.geom, spec.lam, 0, xs, normalized=False)

    left = susy.integrability_probe(bare, "left")
    right = susy.integrability_probe(bare, "right")
    return CheckResult("psi2_integrability", "susy", True, None, None,
                       f"L2-integrable: left={left}, right={right}", info=True)


@_check("psi2_substitution", "susy")
def _psi2_substitution(ctx):
    # report-only: the printed second-component solution passes at n = 0 and
    # fails for n >= 1 (its Jacobi parameter pair is transposed)
    spec = susy.solve_parameter_conditions("equal_radii", a=1.0, B=0.25, branch="-")
    lam, aq, bq = spec.lam, spec.A, spec.B
    v2 = susy.PTCoefficients(aq * (aq + 1.0) + bq * bq, -(1.0 + 2.0 * aq) * bq,
                             -aq * aq)
    xs = np.linspace(0.3, math.pi - 0.3, 2001)
    d = xs[1] - xs[0]
    resids = []
    for n in (0, 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cx = np.cos(xs)
            f = ((1.0 - cx) ** ((1.0 - 2.0 * lam) / 4.0) * (1.0 + cx) ** -0.25
                 * jacobi_poly(JacobiParams(n, -1.0, -lam), cx))
        fpp = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) \
            / (12.0 * d * d)
        eps = (n - aq) ** 2 - aq ** 2
        resids.append(float(np.max(np.abs(-fpp + (v2(xs) - eps)[2:-2] * f[2:-2]))
                            / np.abs(f).max()))
    detail = f"relative residuals: n=0 {resids[0]:.1e}, n=1 {resids[1]:.1e}"
    return CheckResult("psi2_substitution", "susy", True, resids[1], None,
                       detail, info=True)


# --------------------------------------------------------------------------
# algebra
# --------------------------------------------------------------------------

def _closure_params():
    return iso21.AlgebraParams.from_closure(c=1.0, K1=0.6)


def _algebra_grid():
    return np.linspace(0.1, math.pi - 0.4, 2001)


@_check("st_constraints", "algebra")
def _st_constraints(ctx):
    xs = np.linspace(0.05, math.pi - 0.05, 2001)
    s, t = iso21.st_functions(-2.5, xs)
    sp = 1.0 / np.sin(xs) ** 2
    tp = 2.5 * np.cos(xs) / np.sin(xs) ** 2
    worst = float(max(np.max(np.abs(sp - s * s - 1.0)), np.max(np.abs(tp - s * t))))
    return _result("st_constraints", "algebra", worst, 1e-10,
                   "S' - S^2 = 1 and T' - S T = 0")


@_check("constraint77_closure", "algebra")
def _constraint77_closure(ctx):
    r = iso21.constraint_residual_77(_closure_params(), _algebra_grid())
    return _result("constraint77_closure", "algebra", r, 1e-10,
                   "difference form under the closure conditions")


@_check("closure_riccati_pair", "algebra")
def _closure_riccati(ctx):
    r1, r2 = iso21.closure_riccati_residuals(_closure_params(), _algebra_grid())
    return _result("closure_riccati_pair", "algebra", max(r1, r2), 1e-10,
                   "both Riccati identities vanish individually")


@_check("constraint77_negative", "algebra")
def _constraint77_negative(ctx):
    import dataclasses
    p = _closure_params()
    xs = _algebra_grid()
    worst = math.inf
    for fieldname in ("K2", "mu", "B1"):
        q = dataclasses.replace(p, **{fieldname: getattr(p, fieldname) + 0.1})
        worst = min(worst, iso21.constraint_residual_77(q, xs))
    return _result("constraint77_negative", "algebra", worst, 1e-3,
                   "0.1 perturbation of any single parameter", compare="ge")


def _commutator_residual(p, n_points, lo=0.2, hi=math.pi - 0.2, subtract_defect=False):
    xg = np.linspace(lo, hi, n_points)
    jp_m1 = iso21.sector_operator(p, p.mu - 1.0, "raise", xg)
    jm_mu = iso21.sector_operator(p, p.mu, "lower", xg)
    jm_p1 = iso21.sector_operator(p, p.mu + 1.0, "lower", xg)
    jp_mu = iso21.sector_operator(p, p.mu, "raise", xg)
    psi = np.sin(np.pi * (xg - lo) / (hi - lo)) ** 2 \
        * (0.7 + 0.3 * np.sin(3.0 * (xg - lo) + 1.0))
    lhs = jp_m1 @ (jm_mu @ psi) - jm_p1 @ (jp_mu @ psi)
    resid = lhs + 2.0 * p.mu * psi
    if subtract_defect:
        s, _ = iso21.st_functions(p.B1, xg)
        u2 = iso21.modification_U(p.K2, p.geom, xg, 2)
        resid = resid - 4.0 * s * u2 * psi
    return float(np.linalg.norm(resid) / np.linalg.norm(psi))


@_check("commutator_backbone", "algebra")
def _commutator_backbone(ctx):
    p = iso21.AlgebraParams(B1=-0.8, mu=0.3, K1=0.0, K2=0.0,
                            geom=TorusGeometry(1.0, 1.0), mu1=1.3)
    r = _commutator_residual(p, 2048)
    return _result("commutator_backbone", "algebra", r, 1e-4,
                   "[J+, J-] = -2 J3 on the unmodified generators, N=2048")


@_check("commutator_h2_decay", "algebra")
def _commutator_decay(ctx):
    p = iso21.AlgebraParams(B1=-0.8, mu=0.3, K1=0.0, K2=0.0,
                            geom=TorusGeometry(1.0, 1.0), mu1=1.3)
    r1 = _commutator_residual(p, 1024)
    r2 = _commutator_residual(p, 2048)
    ratio = r1 / r2
    ok = 3.0 <= ratio <= 5.5
    return CheckResult("commutator_h2_decay", "algebra", ok, ratio, 4.0,
                       f"residual ratio N=1024/N=2048 = {ratio:.2f}")


@_check("commutator_modified_defect", "algebra")
def _commutator_modified(ctx):
    # With the rational modification terms the operator commutator retains a
    # 4 S U2 multiplication defect; verify the defect is exactly that.
    p = _closure_params()
    raw = _commutator_residual(p, 2048)
    clean = _commutator_residual(p, 2048, subtract_defect=True)
    return _result("commutator_modified_defect", "algebra", clean, 1e-3,
                   f"raw residual {raw:.2f}; after subtracting 4 S U2 psi")


@_check("casimir_susy_constant", "algebra")
def _casimir_constant(ctx):
    p = _closure_params()
    xs = np.linspace(0.05, math.pi - 0.3, 2001)
    mapped = susy.RationalSin(A=-p.mu - 0.5, B=-p.B1, lam=-p.K1, geom=p.geom)
    diff = iso21.casimir_potential(p, xs) - susy.partner_potentials(mapped, xs)[0]
    aa = (-p.mu - 0.5) ** 2
    detail = f"mean {np.mean(diff):.6f} vs A^2 - 1/4 = {aa - 0.25:.6f}"
    return _result("casimir_susy_constant", "algebra", float(np.std(diff)), 1e-10,
                   detail)


@_check("eps_identity", "algebra")
def _eps_identity(ctx):
    p = iso21.AlgebraParams(B1=-0.5, mu=1.5, K1=0.0, K2=0.0,
                            geom=TorusGeometry(1.0, 1.0), mu1=2.5)
    mapped = susy.PureTrigPT(A=-p.mu - 0.5, B=-p.B1)
    worst = 0.0
    for n in range(6):
        eps_alg, _ = iso21.algebra_spectrum(p, n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            eps_susy = susy.analytic_spectrum(mapped, n)
        worst = max(worst, abs(eps_alg - eps_susy))
    return _result("eps_identity", "algebra", worst, 1e-12,
                   "algebra and partner-tower eps agree under A = -mu - 1/2")


@_check("casimir_spectrum_oracle", "algebra")
def _casimir_oracle(ctx):
    p = iso21.AlgebraParams(B1=-0.5, mu=1.5, K1=0.0, K2=0.0,
                            geom=TorusGeometry(1.0, 1.0), mu1=2.5)
    grid = oracle.Grid1D(0.002, math.pi - 0.002, 2000)
    v = iso21.casimir_potential(p, grid.points)
    evals = oracle.solve_potential(v, grid, 4)
    shift = (p.mu + 0.5) ** 2 - 0.25
    worst = 0.0
    for n in range(4):
        eps, _ = iso21.algebra_spectrum(p, n)
        got = evals[n] - shift
        worst = max(worst, abs(got - eps) / max(abs(eps), 1.0))
    return _result("casimir_spectrum_oracle", "algebra", worst, 5e-3,
                   "Casimir potential spectrum matches eps(n) + const")


@_check("scaling_routes", "algebra")
def _scaling_routes(ctx):
    p = _closure_params()
    eps, e89 = iso21.algebra_spectrum(p, 2)
    scalings = iso21.energy_scalings(eps, p.geom.a)
    lam_a = -p.K1                       # via the Casimir comparison
    lam_b = 2.0 * p.geom.a * (-p.mu - 0.5)  # via the cancellation conditions
    detail = (f"E_eq37={scalings['E_eq37']:.6f}, E_eq89={scalings['E_eq89']:.6f}; "
              f"lambda via mapping {lam_a:.3f}, via conditions {lam_b:.3f}")
    return CheckResult("scaling_routes", "algebra", True, None, None, detail,
                       info=True)


SUITES = ("special", "geometry", "susy", "algebra")
CHECKS = {name: (suite, fn) for (name, suite, fn) in _REGISTRY}


def run_suite(suite: str = "all") -> VerifyReport:
    """Execute one named suite (or all of them) and collect the report."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; pick one of {('all',) + SUITES}")
    ctx = Context()
    report = VerifyReport(suite=suite)
    t0 = time.perf_counter()
    for (name, sname, fn) in _REGISTRY:
        if suite != "all" and sname != suite:
            continue
        report.results.append(fn(ctx))
    report.elapsed = time.perf_counter() - t0
    return report
