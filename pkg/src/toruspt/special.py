"""Special-function evaluators backing the closed-form solutions.

Everything here is self-contained (recurrences and truncated series), so each
evaluator can be checked against an independent brute-force oracle: the test
suite compares the Jacobi recurrence against a term-by-term hypergeometric
sum, the incomplete beta against adaptive quadrature, and the double-variable
hypergeometric series against its single-variable reductions.

All operations are pure and deterministic; there is no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergence

__all__ = [
    "SeriesControl",
    "JacobiParams",
    "DEFAULT_CONTROL",
    "jacobi_poly",
    "incomplete_beta",
    "appell_f1",
    "numeric_derivative",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation budget and tolerances for series summation."""

    max_terms: int = 512
    abs_tol: float = 1e-15
    rel_tol: float = 1e-13

    def __post_init__(self):
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.abs_tol < 0.0 or self.rel_tol < 0.0:
            raise DomainError("tolerances must be non-negative")
        if self.abs_tol == 0.0 and self.rel_tol == 0.0:
            raise DomainError("at least one of abs_tol, rel_tol must be positive")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class JacobiParams:
    """Degree and exponent pair (n, alpha, beta) of a Jacobi polynomial."""

    n: int
    alpha: float
    beta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError("degree n must be a non-negative integer")


def _as_negative_integer(x, bound):
    """Return m if x == -m for an integer 1 <= m <= bound, else None."""
    r = round(x)
    if abs(x - r) < 1e-12 and -bound <= r <= -1:
        return -int(r)
    return None


def _recurrence_degenerate(n, a, b):
    # Leading coefficient 2k(k+a+b)(2k+a+b-2) vanishes for some k in 2..n
    # exactly when a+b is an integer in [-(2n-2), -2].
    s = a + b
    r = round(s)
    return abs(s - r) < 1e-12 and -(2 * n - 2) <= r <= -2


def _jacobi_recurrence(n, a, b, z):
    p_prev = np.ones_like(z)
    if n == 0:
        return p_prev
    p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * z
    for k in range(2, n + 1):
        c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0)
        c2 = (2.0 * k + a + b - 1.0) * (a * a - b * b)
        c3 = (2.0 * k + a + b - 2.0) * (2.0 * k + a + b - 1.0) * (2.0 * k + a + b)
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b)
        p, p_prev = ((c2 + c3 * z) * p - c4 * p_prev) / c1, p
    return p


def _jacobi_terminating_series(n, a, b, z):
    # P_n^(a,b)(z) = (a+1)_n/n! * sum_k (-n)_k (n+a+b+1)_k / ((a+1)_k k!) u^k,
    # u = (1-z)/2.  Valid when a+k != 0 for k = 1..n.
    u = 0.5 * (1.0 - z)
    term = np.ones_like(z)
    acc = np.ones_like(z)
    for k in range(1, n + 1):
        term = term * ((-n + k - 1.0) * (n + a + b + k) / ((a + k) * k)) * u
        acc = acc + term
    pref = 1.0
    for j in range(1, n + 1):
        pref *= (a + j) / j
    return pref * acc


def jacobi_poly(params: JacobiParams, z):
    """Evaluate the Jacobi polynomial P_n^(alpha,beta)(z).

    Forward three-term recurrence; z may be a scalar or an ndarray and may
    lie outside [-1, 1].  Negative-integer alpha (or beta) and the
    recurrence-degenerate manifold alpha+beta in {-2, -3, ...} are routed
    through the parameter-limit identity / terminating series, so the
    function is total.
    """
    n, a, b = params.n, params.alpha, params.beta
    z_arr = np.asarray(z, dtype=float)
    if n == 0:
        out = np.ones_like(z_arr)
        return float(out) if np.isscalar(z) or z_arr.ndim == 0 else out

    m = _as_negative_integer(a, n)
    if m is not None:
        # limit identity for alpha = -m, n >= m:
        # P_n^(-m,b) = [(n+b-m+1)_m / (n-m+1)_m] * ((z-1)/2)^m * P_{n-m}^(m,b)
        num = 1.0
        den = 1.0
        for j in range(m):
            num *= n + b - m + 1.0 + j
            den *= n - m + 1.0 + j
        inner = jacobi_poly(JacobiParams(n - m, float(m), b), z_arr)
        out = (num / den) * (0.5 * (z_arr - 1.0)) ** m * np.asarray(inner)
    elif _as_negative_integer(b, n) is not None:
        # mirror symmetry P_n^(a,b)(z) = (-1)^n P_n^(b,a)(-z)
        out = (-1.0) ** n * np.asarray(jacobi_poly(JacobiParams(n, b, a), -z_arr))
    elif _recurrence_degenerate(n, a, b):
        out = _jacobi_terminating_series(n, a, b, z_arr)
    else:
        out = _jacobi_recurrence(n, a, b, z_arr)
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return float(out)
    return out


def _incbeta_series(z, s, w, ctl):
    """sum form B(z;s,w) = z^s sum_k (1-w)_k z^k / (k! (s+k)), vectorized in z."""
    acc = np.full_like(z, 1.0 / s)
    f = np.ones_like(z)
    converged = np.zeros_like(z, dtype=bool)
    for k in range(1, ctl.max_terms + 1):
        f = f * ((k - w) / k) * z
        term = f / (s + k)
        acc = acc + term
        converged = np.abs(term) <= ctl.abs_tol + ctl.rel_tol * np.abs(acc)
        if np.all(converged):
            break
    else:
        raise NonConvergence(
            f"incomplete beta series did not converge in {ctl.max_terms} terms"
        )
    return np.power(z, s) * acc


def _log_beta(s, w):
    return math.lgamma(s) + math.lgamma(w) - math.lgamma(s + w)


def incomplete_beta(z, s, w, ctl: SeriesControl = DEFAULT_CONTROL):
    """Incomplete beta function B(z; s, w) = int_0^z u^(s-1) (1-u)^(w-1) du.

    Requires 0 < z < 1 and s > 0 (integrability at the lower endpoint);
    w may be any real.  z may be a scalar or an ndarray.  Monotone
    non-decreasing in z, and for s, w > 0 it approaches the complete beta
    function as z -> 1.

    Raises DomainError outside the domain, NonConvergence if the series
    budget is exhausted (which happens for w <= 0 with z very close to 1,
    where the integral grows without bound).
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.0) or np.any(z_arr >= 1.0):
        raise DomainError("incomplete beta requires 0 < z < 1")
    if not (s > 0.0):
        raise DomainError("incomplete beta requires s > 0 for integrability at 0")

    if w == 0.0:
        # (1-w)_k = k!, series still geometric in z; no reflection available
        out = _incbeta_series(z_arr, s, w, ctl)
    elif w < 0.0:
        # raise w until positive:  B(z;s,w) = [(s+w) B(z;s,w+1) - z^s (1-z)^w] / w
        up = incomplete_beta(z_arr, s, w + 1.0, ctl)
        out = ((s + w) * up - np.power(z_arr, s) * np.power(1.0 - z_arr, w)) / w
    else:
        out = np.empty_like(z_arr)
        near1 = z_arr > 0.75
        if np.any(~near1):
            out[~near1] = _incbeta_series(z_arr[~near1], s, w, ctl)
        if np.any(near1):
            # reflect about z -> 1-z where the direct series crawls
            complete = math.exp(_log_beta(s, w))
            out[near1] = complete - _incbeta_series(1.0 - z_arr[near1], w, s, ctl)
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return float(out)
    return out


def appell_f1(a, b1, b2, c, x, y, ctl: SeriesControl = DEFAULT_CONTROL):
    """Appell F1(a; b1, b2; c; x, y) by truncated double series.

    Terms T(m,n) = (a)_{m+n} (b1)_m (b2)_n / ((c)_{m+n} m! n!) x^m y^n are
    summed along anti-diagonals m+n = const (diagonal sweep); convergence is
    declared when two consecutive diagonal sums fall below tolerance.
    Requires |x| < 1, |y| < 1 and c not a non-positive integer.  max_terms
    caps the largest anti-diagonal index.
    """
    if not (abs(x) < 1.0 and abs(y) < 1.0):
        raise DomainError("appell_f1 requires |x| < 1 and |y| < 1")
    if c <= 0.0 and abs(c - round(c)) < 1e-12:
        raise DomainError("appell_f1 requires c not a non-positive integer")
    if x == 0.0 and y == 0.0:
        return 1.0

    size = 48
    while True:
        size = min(size, ctl.max_terms + 1)
        j = np.arange(size, dtype=float)
        # row 0 over n: ratio (a+n-1)(b2+n-1) y / ((c+n-1) n)
        row = np.ones(size)
        if size > 1:
            r = (a + j[1:] - 1.0) * (b2 + j[1:] - 1.0) * y / ((c + j[1:] - 1.0) * j[1:])
            row[1:] = np.cumprod(r)
        terms = np.empty((size, size))
        terms[0] = row
        for i in range(1, size):
            # ratio over m at fixed n: (a+m+n-1)(b1+m-1) x / ((c+m+n-1) m)
            terms[i] = terms[i - 1] * ((a + i + j - 1.0) * (b1 + i - 1.0) * x
                                       / ((c + i + j - 1.0) * i))
        idx = (np.arange(size)[:, None] + np.arange(size)[None, :]).ravel()
        diag_sums = np.bincount(idx, weights=terms.ravel(), minlength=2 * size - 1)
        diag_sums = diag_sums[:size]  # only complete anti-diagonals
        if not np.all(np.isfinite(diag_sums)):
            raise NonConvergence("appell_f1 series overflowed before converging")
        partial = np.cumsum(diag_sums)
        tol = ctl.abs_tol + ctl.rel_tol * np.abs(partial)
        small = np.abs(diag_sums) <= tol
        ok = small[1:] & small[:-1]
        hits = np.nonzero(ok)[0]
        if hits.size:
            return float(partial[hits[0] + 1])
        if size >= ctl.max_terms + 1:
            raise NonConvergence(
                f"appell_f1 did not converge within {ctl.max_terms} diagonals"
            )
        size *= 2


def numeric_derivative(f, x, order=1, h=1e-5):
    """Central finite-difference derivative of a callable, error O(h^2).

    order 1: (f(x+h) - f(x-h)) / 2h;  order 2: standard second difference.
    """
    if h <= 0.0:
        raise DomainError("step h must be positive")
    if order == 1:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if order == 2:
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    raise DomainError("order must be 1 or 2")
