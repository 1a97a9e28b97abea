"""Torus surface geometry and the reduction to 1D Schrodinger form.

The profile radius is R(x) = c + a cos x.  After separating the angular and
time dependence, each spinor component obeys a second-order equation whose
first-derivative term is removed by the substitution psi = f(x) F(g(x)); the
slope g' doubles as the inverse Fermi-velocity profile, V_F = 1/g'.

The transform solver works in w = 1/g'^2, where the defining condition
"reduced potential == target" becomes a linear first-order ODE.  Its output
is validated downstream by the round-trip residual, which re-derives the
reduced potential from the sampled slope with finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, solve_ivp

from .errors import (
    BlowUp,
    DegenerateMode,
    DomainError,
    IndexOutOfRange,
    InvalidVelocity,
    SingularGeometry,
)
from .special import numeric_derivative

__all__ = [
    "TorusGeometry",
    "ModeParams",
    "TransformResult",
    "profile_radius",
    "christoffel",
    "spin_connection_coeff",
    "effective_coefficients",
    "solve_g_transform",
    "reduced_potential",
    "reduced_potential_grid",
    "prefactor_f",
]

_W_FLOOR = 1e-280
_W_CEIL = 1e280


@dataclass(frozen=True)
class TorusGeometry:
    """Tube radius a > 0 and inner radius c (either sign, nonzero)."""

    a: float
    c: float

    def __post_init__(self):
        if not (self.a > 0.0):
            raise DomainError("tube radius a must be positive")
        if self.c == 0.0:
            raise DomainError("inner radius c must be nonzero")

    @property
    def equal_radii(self) -> bool:
        return self.a == self.c

    def radius(self, x):
        return self.c + self.a * np.cos(x)


@dataclass(frozen=True)
class ModeParams:
    """Conserved angular wavenumber k and spinor component selector (1 or 2)."""

    k: float
    component: int = 1

    def __post_init__(self):
        if self.component not in (1, 2):
            raise DomainError("component must be 1 or 2")


@dataclass(frozen=True)
class TransformResult:
    """Sampled point-canonical transform: g, g', V_F = 1/g' and the prefactor f."""

    x: np.ndarray
    g: np.ndarray
    g_prime: np.ndarray
    fermi_velocity: np.ndarray
    prefactor: np.ndarray
    component: int = 1
    h0: float = 1.0

    def __post_init__(self):
        if np.any(self.g_prime <= 0.0):
            raise BlowUp("g' must stay positive on the grid")


def profile_radius(geom: TorusGeometry, x):
    """R, R', R'' of the profile R(x) = c + a cos x."""
    x = np.asarray(x, dtype=float) if not np.isscalar(x) else x
    r = geom.c + geom.a * np.cos(x)
    rp = -geom.a * np.sin(x)
    rpp = -geom.a * np.cos(x)
    return r, rp, rpp


def _require_regular(r):
    if np.any(np.asarray(r) == 0.0):
        raise SingularGeometry("profile radius R(x) vanishes at a requested point")


def christoffel(geom: TorusGeometry, x):
    """Nonzero Christoffel symbols (Gamma^1_22, Gamma^2_12) of the surface metric."""
    r, _, _ = profile_radius(geom, x)
    _require_regular(r)
    g1_22 = (1.0 / geom.a) * r * np.sin(x)
    g2_12 = -geom.a * np.sin(x) / r
    return g1_22, g2_12


def spin_connection_coeff(geom: TorusGeometry, x):
    """Scalar s(x) with Gamma_2 = gamma_1 gamma_2 s(x); equals Gamma^2_12 / 2."""
    r, _, _ = profile_radius(geom, x)
    _require_regular(r)
    return -geom.a * np.sin(x) / (2.0 * r)


def effective_coefficients(geom, mode: ModeParams, x, vf, vf_prime=None):
    """Zeroth-order coefficient U_1(x) or U_2(x) of the separated equation.

    vf is the Fermi-velocity profile V_F(x) (callable); its derivative is
    taken by central differences when vf_prime is not supplied.  The two
    components differ in the signs of the two k-linear terms; the last term
    carries 1/V_F only for component 2.
    """
    r, rp, rpp = profile_radius(geom, x)
    _require_regular(r)
    v = vf(x)
    if np.any(np.asarray(v) <= 0.0):
        raise InvalidVelocity("Fermi velocity must be positive")
    vp = vf_prime(x) if vf_prime is not None else numeric_derivative(vf, x, order=1)
    a, k = geom.a, mode.k
    common = (- rp**2 * a**2 / (4.0 * r**4)
              - rp**2 * a / r**3
              + rp * vp * a / (2.0 * r**2 * v)
              + k**2 * a**4 / r**4)
    if mode.component == 1:
        return (common
                - 2.0 * k * rp * a**2 / r**3
                + k * vp * a**2 / (r**2 * v)
                + rpp * a / (2.0 * r**2))
    return (common
            + 2.0 * k * rp * a**2 / r**3
            - k * vp * a**2 / (r**2 * v)
            + rpp * a / (2.0 * r**2 * v))


def _target_values(target, x):
    return (target.coeff_csc2 / np.sin(x) ** 2
            + target.coeff_cotcsc * np.cos(x) / np.sin(x) ** 2
            + target.eps_const)


def solve_g_transform(geom, mode: ModeParams, target, grid, h0=1.0):
    """Find g with g' > 0 whose reduced potential matches the target on the grid.

    In w = 1/g'^2 the defining condition is linear:
        component 1:  w' = -2 p(x) w + 2 V R^2 / (a^2 k),  p = a^2 k/R^2 - 2R'/R
        component 2:  w' = +2 q(x) w - 2 V R^2 / (a^2 k),  q = a^2 k/R^2 + 2R'/R
    integrated from the grid midpoint with w = 1/h0^2 there.  k = 0 makes
    every term of the reduced potential vanish, so only a zero target is
    representable (DegenerateMode otherwise).  BlowUp is raised if w leaves
    (0, inf) inside the grid.
    """
    x = np.asarray(grid, dtype=float)
    if x.ndim != 1 or x.size < 3:
        raise DomainError("grid must be a 1D array with at least 3 points")
    if np.any(x <= 0.0) or np.any(x >= math.pi):
        raise DomainError("grid must be interior to (0, pi)")
    if h0 <= 0.0:
        raise DomainError("initial slope h0 must be positive")
    a, k = geom.a, mode.k

    if k == 0.0:
        if (target.coeff_csc2 != 0.0 or target.coeff_cotcsc != 0.0
                or target.eps_const != 0.0):
            raise DegenerateMode(
                "k = 0 zeroes the reduced potential; nonzero targets unreachable")
        h = np.full_like(x, h0)
        return _pack_transform(geom, x, h, mode.component, h0)

    sign = 1.0 if mode.component == 1 else -1.0

    def rhs(t, w):
        r = geom.c + a * math.cos(t)
        rp = -a * math.sin(t)
        p = a * a * k / (r * r) - sign * 2.0 * rp / r
        v = _target_values(target, t)
        return sign * (-2.0 * p * w[0] + 2.0 * v * r * r / (a * a * k))

    def hit_floor(t, w):
        return w[0] - _W_FLOOR

    def hit_ceil(t, w):
        return w[0] - _W_CEIL

    hit_floor.terminal = True
    hit_ceil.terminal = True

    i_mid = x.size // 2
    w_mid = 1.0 / (h0 * h0)
    w = np.empty_like(x)
    w[i_mid] = w_mid
    for sl, x0, x1 in (
        (slice(i_mid, x.size), x[i_mid], x[-1]),
        (slice(i_mid, None, -1), x[i_mid], x[0]),
    ):
        pts = x[sl]
        if pts.size < 2:
            continue
        sol = solve_ivp(rhs, (x0, x1), [w_mid], t_eval=pts, method="DOP853",
                        rtol=1e-12, atol=1e-14, events=(hit_floor, hit_ceil))
        if not sol.success:
            raise BlowUp(f"transform ODE integration failed: {sol.message}")
        if sol.status == 1 or sol.y.shape[1] < pts.size:
            raise BlowUp("g' left (0, inf) inside the grid")
        w[sl] = sol.y[0]
    if np.any(w <= _W_FLOOR) or np.any(w >= _W_CEIL) or not np.all(np.isfinite(w)):
        raise BlowUp("g' left (0, inf) inside the grid")
    h = 1.0 / np.sqrt(w)
    return _pack_transform(geom, x, h, mode.component, h0)


def _pack_transform(geom, x, h, component, h0):
    g = cumulative_trapezoid(h, x, initial=0.0)
    r = geom.c + geom.a * np.cos(x)
    _require_regular(r)
    return TransformResult(
        x=x, g=g, g_prime=h, fermi_velocity=1.0 / h,
        prefactor=np.exp(-geom.a / (2.0 * r)), component=component, h0=h0,
    )


_ONESIDED_4TH = np.array([-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25])


def _gpp_central(x, h, i):
    # 4th-order central difference of g' where the stencil fits, one-sided
    # 4th-order at the first/last interior node
    d = x[1] - x[0]
    if 2 <= i <= x.size - 3:
        return (-h[i + 2] + 8.0 * h[i + 1] - 8.0 * h[i - 1] + h[i - 2]) / (12.0 * d)
    if i < 2:
        return float(_ONESIDED_4TH @ h[i:i + 5]) / d
    return -float(_ONESIDED_4TH @ h[i - 4:i + 1][::-1]) / d


def reduced_potential(geom, mode: ModeParams, transform: TransformResult, i: int):
    """Reduced potential at interior grid index i, with g'' by central differences.

    Component 1:  V = a^4 k^2/(R^4 g'^2) - 2 a^2 k R'/(R^3 g'^2) - a^2 k g''/(R^2 g'^3);
    component 2 flips the signs of the last two terms.
    """
    x = transform.x
    if not 1 <= i <= x.size - 2:
        raise IndexOutOfRange("central stencil needs 1 <= i <= n-2")
    gpp = _gpp_central(x, transform.g_prime, i)
    return _reduced_value(geom, mode, x[i], transform.g_prime[i], gpp)


def reduced_potential_grid(geom, mode: ModeParams, transform: TransformResult):
    """Reduced potential on the interior nodes (vectorized form of reduced_potential)."""
    x, h = transform.x, transform.g_prime
    d = x[1] - x[0]
    gpp = np.empty(x.size - 2)
    gpp[0] = float(_ONESIDED_4TH @ h[1:6]) / d
    gpp[-1] = -float(_ONESIDED_4TH @ h[-6:-1][::-1]) / d
    gpp[1:-1] = (-h[4:] + 8.0 * h[3:-1] - 8.0 * h[1:-3] + h[:-4]) / (12.0 * d)
    return _reduced_value(geom, mode, x[1:-1], h[1:-1], gpp)


def _reduced_value(geom, mode, x, h, gpp):
    a, k = geom.a, mode.k
    r = geom.c + a * np.cos(x)
    _require_regular(r)
    rp = -a * np.sin(x)
    sign = 1.0 if mode.component == 1 else -1.0
    return (a**4 * k**2 / (r**4 * h**2)
            - sign * 2.0 * a**2 * k * rp / (r**3 * h**2)
            - sign * a**2 * k * gpp / (r**2 * h**3))


def prefactor_f(geom: TorusGeometry, x):
    """Row-reduction prefactor f(x) = e^(-a/2R); with V_F = 1/g' the C1 e/sqrt
    form collapses to this pure exponential."""
    r, _, _ = profile_radius(geom, x)
    _require_regular(r)
    return np.exp(-geom.a / (2.0 * r))
