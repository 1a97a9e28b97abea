"""Machine-checked errata for the source derivation.

Each entry records one internal inconsistency found in the published
derivation this package reconstructs, the resolution adopted here, and a
small numeric computation substantiating it.  Entries cross-reference the
verification-suite checks that exercise the same resolution at full
tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import iso21, susy
from .geometry import TorusGeometry
from .special import JacobiParams, incomplete_beta, jacobi_poly

__all__ = ["ErrataEntry", "ENTRIES", "render_text"]


@dataclass
class ErrataEntry:
    key: str
    summary: str
    resolution: str
    check_refs: tuple
    evidence_fn: object = None  # lazy: computed only when rendering

    def evidence(self) -> dict:
        return self.evidence_fn() if self.evidence_fn is not None else {}


def _ev_eq36():
    spec = susy.PureTrigPT(-2.0, 0.5)
    pc = susy.pt_coefficients(spec, "minus")
    return {"coeff_csc2 (A(A+1)+B^2)": pc.coeff_csc2,
            "coeff_cotcsc ((1+2A)B)": pc.coeff_cotcsc}


def _ev_eq37_vs_eq89():
    scal = iso21.energy_scalings(5.0, 2.0)
    return {"eps": 5.0, "a": 2.0, **scal}


def _ev_eq54():
    spec = susy.solve_parameter_conditions("equal_radii", a=1.0, B=0.25, branch="-")
    lam, aq = spec.lam, spec.A
    v2 = susy.PTCoefficients(aq * (aq + 1.0) + spec.B ** 2,
                             -(1.0 + 2.0 * aq) * spec.B, -aq * aq)
    xs = np.linspace(0.3, math.pi - 0.3, 1201)
    d = xs[1] - xs[0]
    out = {}
    for n in (0, 1):
        cx = np.cos(xs)
        f = ((1.0 - cx) ** ((1.0 - 2.0 * lam) / 4.0) * (1.0 + cx) ** -0.25
             * jacobi_poly(JacobiParams(n, -1.0, -lam), cx))
        fpp = (-f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]) \
            / (12.0 * d * d)
        eps = (n - aq) ** 2 - aq ** 2
        out[f"substitution_residual_n{n}"] = float(
            np.max(np.abs(-fpp + (v2(xs) - eps)[2:-2] * f[2:-2])) / np.abs(f).max())
    return out


def _beta_identity_residual(coeff_power):
    # residual of V- = W^2 - W' for the beta tail with denominator
    # C1 + 4**coeff_power * B(cos^2(x/2); ...)
    abt, bbt, c1 = 1.0, 0.25, 1.0
    geom = TorusGeometry(1.0, 1.5)
    xs = np.linspace(0.2, math.pi - 0.2, 401)

    def w_of(x):
        sx = np.sin(x)
        m = sx ** (2.0 * abt) * np.tan(0.5 * x) ** (2.0 * bbt)
        bz = incomplete_beta(np.cos(0.5 * x) ** 2, 0.5 + abt - bbt, 0.5 + abt + bbt)
        return (abt * np.cos(x) + bbt) / sx + m / (c1 + 4.0 ** coeff_power * bz)

    h = 1e-5
    wp = (w_of(xs + h) - w_of(xs - h)) / (2.0 * h)
    vm = susy.pt_coefficients(susy.BetaTail(abt, bbt, c1, geom), "minus")(xs)
    return float(np.max(np.abs(vm - (w_of(xs) ** 2 - wp))))


def _ev_eq57_coeff():
    return {"identity_residual_with_4^A": _beta_identity_residual(1.0),
            "identity_residual_with_4^B (printed)": _beta_identity_residual(0.25)}


def _ev_eq57_domain():
    a_bad, b_bad = -2.0, 0.5
    return {"example (A, B)": (a_bad, b_bad),
            "first beta argument 1/2+A-B": 0.5 + a_bad - b_bad,
            "accepted": False}


def _bracket_max(a, lam, b_val, c_val):
    aa = lam / (2.0 * a)
    xs = np.linspace(0.1, math.pi - 0.1, 501)
    br = (lam * (2.0 * a * (aa - 1.0) + 4.0 * b_val * c_val + lam)
          + 2.0 * lam * (2.0 * a * b_val + c_val * (2.0 * aa - 1.0)) * np.cos(xs)
          + lam * (2.0 * a * aa - lam) * np.cos(2.0 * xs))
    return float(np.max(np.abs(br)))


def _ev_eq67_eq68():
    a, lam = 1.0, 2.0
    # printed radical values (inherit the stray "1 +")
    rad = math.sqrt((1.0 - 2.0 * a + 2.0 * lam) / (-2.0 * a + 2.0 * lam))
    b_printed, c_printed = 0.5 * (1.0 - lam / a) * rad, a * rad
    # corrected values (terminate the rational part exactly)
    b_fixed, c_fixed = 0.5 * (1.0 - lam / a), a
    return {
        "rational numerator, printed B,c": _bracket_max(a, lam, b_printed, c_printed),
        "rational numerator, corrected B,c": _bracket_max(a, lam, b_fixed, c_fixed),
        "resolution A": "A = lambda/(2a)",
    }


def _commutator_residual_sign(sign):
    # backbone commutator residual with bracket sign +((nu+-1/2)S - T) (used)
    # versus the printed -((nu+-1/2)S - T)
    geom = TorusGeometry(1.0, 1.0)
    p = iso21.AlgebraParams(B1=-0.8, mu=0.3, K1=0.0, K2=0.0, geom=geom, mu1=1.3)
    lo, hi, n = 0.2, math.pi - 0.2, 1024
    xg = np.linspace(lo, hi, n)
    step = xg[1] - xg[0]

    def op(nu, direction):
        sgn = 1.0 if direction == "raise" else -1.0
        label = nu + 0.5 if direction == "raise" else nu - 0.5
        s, t = iso21.st_functions(p.B1, xg)
        d = np.zeros((n, n))
        idx = np.arange(1, n - 1)
        d[idx, idx + 1] = 1.0 / (2.0 * step)
        d[idx, idx - 1] = -1.0 / (2.0 * step)
        d[0, 0:3] = np.array([-1.5, 2.0, -0.5]) / step
        d[n - 1, n - 3:] = np.array([0.5, -2.0, 1.5]) / step
        return 1j * (sgn * d + sign * np.diag(label * s - t))

    psi = np.sin(np.pi * (xg - lo) / (hi - lo)) ** 2
    lhs = op(p.mu - 1.0, "raise") @ (op(p.mu, "lower") @ psi) \
        - op(p.mu + 1.0, "lower") @ (op(p.mu, "raise") @ psi)
    return float(np.linalg.norm(lhs + 2.0 * p.mu * psi) / np.linalg.norm(psi))


def _ev_eq73():
    return {"commutator residual, corrected sign": _commutator_residual_sign(+1.0),
            "commutator residual, printed sign": _commutator_residual_sign(-1.0)}


def _ev_eq77():
    p = iso21.AlgebraParams.from_closure(c=1.0, K1=0.6)
    xs = np.linspace(0.1, math.pi - 0.4, 801)
    r1, r2 = iso21.closure_riccati_residuals(p, xs)
    # verbatim reading: -U2' inside the bracket and coefficient mu1 (not mu1+1/2)
    s, t = iso21.st_functions(p.B1, xs)
    u1 = iso21.modification_U(p.K1, p.geom, xs, 1)
    u2 = iso21.modification_U(p.K2, p.geom, xs, 2)
    r = p.geom.c + p.geom.a * np.cos(xs)
    u1p = -p.K1 * (np.cos(xs) * r + p.geom.a * np.sin(xs) ** 2) / r**2
    u2p = p.K2 * (np.cos(xs) * r + p.geom.a * np.sin(xs) ** 2) / r**2
    verbatim = (u1 * u1 - u1p + 2.0 * u1 * ((p.mu + 0.5) * s - t)
                - (u2 * u2 - u2p + 2.0 * u2 * (p.mu1 * s - t)))
    return {"riccati pair (corrected)": max(r1, r2),
            "verbatim reading residual": float(np.max(np.abs(verbatim)))}


def _ev_eq65():
    # the cos 2x term of the rational numerator carries a lambda factor
    spec = susy.RationalSin(0.7, 0.3, 1.3, TorusGeometry(1.0, 1.7))
    xs = np.linspace(0.2, math.pi - 0.2, 601)
    h = 1e-5
    w = susy.superpotential_eval(spec, xs)
    wp = (susy.superpotential_eval(spec, xs + h)
          - susy.superpotential_eval(spec, xs - h)) / (2.0 * h)
    vm, _ = susy.partner_potentials(spec, xs)  # uses lambda*(2aA - lambda) cos 2x
    return {"V- identity residual with lambda factor": float(
        np.max(np.abs(vm - (w * w - wp))))}


def _ev_eq17():
    return {"note": "mixed powers of a across terms are implemented verbatim; "
                    "the acceptance suite runs in units a = 1 where the "
                    "ambiguity is inert"}


def _ev_commutator_defect():
    from .verify import _commutator_residual
    p = iso21.AlgebraParams.from_closure(c=1.0, K1=0.6)
    return {"raw residual": _commutator_residual(p, 1024),
            "after subtracting 4*S*U2*psi": _commutator_residual(
                p, 1024, subtract_defect=True)}


ENTRIES = [
    ErrataEntry(
        key="eq36",
        summary="The constant names attached to the csc^2 and cot csc terms are "
                "swapped between the transform target and the solved family.",
        resolution="Internal names are explicit: coeff_csc2 = A(A+1)+B^2, "
                   "coeff_cotcsc = (1+2A)B, eps_const = -A^2.",
        check_refs=("susy/identity_pt_analytic", "susy/spectrum_pt_oracle"),
        evidence_fn=_ev_eq36,
    ),
    ErrataEntry(
        key="eq37_vs_eq89",
        summary="Two physical-energy formulas scale the same eps by 1/a^2 and "
                "by 1/a respectively.",
        resolution="The dimensionless eps is canonical; both scalings are "
                   "emitted side by side as E_eq37 and E_eq89.",
        check_refs=("algebra/scaling_routes",),
        evidence_fn=_ev_eq37_vs_eq89,
    ),
    ErrataEntry(
        key="eq54",
        summary="The printed second-component solution uses the degenerate "
                "Jacobi parameter alpha = -1 and transposes the parameter "
                "pair; only its n = 0 member solves the equation.",
        resolution="Evaluated verbatim through the parameter-limit identity; "
                   "the substitution residual is reported, not hidden. The "
                   "solving pair is (-lambda/a, -1).",
        check_refs=("susy/psi2_substitution",),
        evidence_fn=_ev_eq54,
    ),
    ErrataEntry(
        key="eq57",
        summary="The beta-tail denominator coefficient reads 4^B where only "
                "4^A cancels the rational term.",
        resolution="Denominator C1 + 4^A * B(cos^2(x/2); 1/2+A-B, 1/2+A+B); "
                   "C1 generalizes the printed constant 4^-A.",
        check_refs=("susy/identity_beta_fd",),
        evidence_fn=_ev_eq57_coeff,
    ),
    ErrataEntry(
        key="eq57_domain",
        summary="For solvable-regime parameters the first beta-function "
                "argument 1/2+A-B is negative and the defining integral "
                "diverges at its lower endpoint.",
        resolution="The beta-tail family requires 1/2+A-B > 0 and rejects "
                   "other parameter sets.",
        check_refs=("special/beta_quadrature",),
        evidence_fn=_ev_eq57_domain,
    ),
    ErrataEntry(
        key="eq65",
        summary="The cos 2x term of the rational numerator is missing its "
                "lambda factor.",
        resolution="Implemented as lambda*(2aA - lambda) cos 2x, under which "
                   "the identity V- = W^2 - W' holds.",
        check_refs=("susy/identity_rational_fd",),
        evidence_fn=_ev_eq65,
    ),
    ErrataEntry(
        key="eq67",
        summary="The first termination condition carries a stray '1 +' that "
                "leaves a -lambda/(2P^2) rational remainder.",
        resolution="Condition taken as 2a(A-1) + 4Bc + lambda = 0, which "
                   "terminates the rational part exactly.",
        check_refs=("susy/cancellation_rational", "susy/identity_appell_fd"),
        evidence_fn=_ev_eq67_eq68,
    ),
    ErrataEntry(
        key="eq68",
        summary="'A = lambda/2A' is circular, and the printed radicals for B "
                "and c inherit the stray constant so they do not cancel the "
                "rational term.",
        resolution="A = lambda/(2a); B = +-(1 - lambda/a)/2 and c = +-a, "
                   "validated by the numeric cancellation oracle.",
        check_refs=("susy/identity_appell_fd", "susy/appell_g_functional"),
        evidence_fn=_ev_eq67_eq68,
    ),
    ErrataEntry(
        key="eq73",
        summary="With the printed sign of ((J3 +- 1/2)S - T) the generators "
                "contradict the printed constraints S'-S^2 = 1, T'-ST = 0.",
        resolution="The bracket enters with a plus sign; the backbone "
                   "commutator then closes to -2 J3.",
        check_refs=("algebra/commutator_backbone", "algebra/st_constraints"),
        evidence_fn=_ev_eq73,
    ),
    ErrataEntry(
        key="eq77",
        summary="The closure constraint leaves F and G undefined, flips the "
                "sign of U2' and truncates the coefficient of the U2 bracket.",
        resolution="F := S, G := T; constraint read as the pair "
                   "U1^2 - U1' + 2U1((mu+1/2)S - T) = 0 and "
                   "U2^2 + U2' + 2U2((mu1+1/2)S - T) = 0, each exact under "
                   "the closure conditions.",
        check_refs=("algebra/closure_riccati_pair", "algebra/constraint77_closure"),
        evidence_fn=_ev_eq77,
    ),
    ErrataEntry(
        key="eq75_modified",
        summary="With the rational modification terms the operator commutator "
                "[J+, J-] is not -2 J3: a 4 S U2 multiplication defect "
                "remains even under the closure conditions.",
        resolution="Closure holds in the Riccati/Casimir sense (the spectrum "
                   "construction is unaffected); the defect is measured and "
                   "matches 4 S U2 exactly.",
        check_refs=("algebra/commutator_modified_defect",),
        evidence_fn=_ev_commutator_defect,
    ),
    ErrataEntry(
        key="eq17_eq45",
        summary="The zeroth-order coefficients mix powers of a across terms "
                "(a^2/R^4 against a/R^3).",
        resolution="Implemented verbatim; all quantitative checks run in "
                   "units a = 1 where the mix is inert.",
        check_refs=("geometry/roundtrip_component1",),
        evidence_fn=_ev_eq17,
    ),
]


def render_text() -> str:
    lines = ["machine-checked errata (resolutions backed by the verify suite)", ""]
    for e in ENTRIES:
        lines.append(f"[{e.key}]")
        lines.append(f"  issue:      {e.summary}")
        lines.append(f"  resolution: {e.resolution}")
        for k, v in e.evidence().items():
            if isinstance(v, float):
                lines.append(f"  evidence:   {k} = {v:.6e}")
            else:
                lines.append(f"  evidence:   {k} = {v}")
        lines.append(f"  checks:     {', '.join(e.check_refs)}")
        lines.append("")
    return "\n".join(lines)
