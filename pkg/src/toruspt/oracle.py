"""Independent finite-difference Sturm-Liouville eigensolver.

This module is the ground truth against which every closed-form spectrum and
eigenfunction claim is checked, so it deliberately shares no code with the
analytic side: the operator -d^2/dx^2 + V is discretized with the standard
second-order stencil under Dirichlet conditions, eigenvalues come from
bisection on Sturm sign counts, and eigenvectors from inverse iteration.

Singular potential endpoints (the csc^2 walls at 0 and pi) are handled by
truncating the domain slightly inside (0, pi); the repulsive wall makes the
truncation error negligible.  Potentials whose endpoint 1/x^2 coefficient
falls below the Friedrichs bound -1/4 are rejected: below the bound the
operator has no unique self-adjoint extension and a Dirichlet spectrum would
be an artifact of the cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    ConvergenceFailure,
    DomainError,
    IllPosedPotential,
    NonFinitePotential,
)

__all__ = [
    "Grid1D",
    "SymTridiagonal",
    "EigenReport",
    "build_hamiltonian",
    "lowest_eigenvalues",
    "eigenpairs",
    "solve_potential",
    "isospectral_check",
    "spectrum_report",
    "check_friedrichs",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform interior grid with Dirichlet endpoints at x_lo and x_hi.

    n_points counts the interior nodes (the matrix dimension); spacing is
    h = (x_hi - x_lo) / (n_points + 1).
    """

    x_lo: float
    x_hi: float
    n_points: int

    def __post_init__(self):
        if not (0.0 < self.x_lo < self.x_hi < math.pi):
            raise DomainError("grid must satisfy 0 < x_lo < x_hi < pi")
        if self.n_points < 64:
            raise DomainError("grid needs at least 64 interior points")

    @property
    def h(self) -> float:
        return (self.x_hi - self.x_lo) / (self.n_points + 1)

    @property
    def points(self) -> np.ndarray:
        return self.x_lo + self.h * np.arange(1, self.n_points + 1)


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal matrix stored as diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if self.offdiag.shape[0] != self.diag.shape[0] - 1:
            raise DomainError("offdiag must have length n-1")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def toarray(self) -> np.ndarray:
        m = np.diag(self.diag)
        idx = np.arange(self.n - 1)
        m[idx, idx + 1] = self.offdiag
        m[idx + 1, idx] = self.offdiag
        return m

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


@dataclass
class EigenReport:
    """Comparison of a reference spectrum against the finite-difference one."""

    case: str
    params: dict
    levels: list  # rows {n, eps_analytic, eps_numeric, abs_err, rel_err}
    rel_tol: float
    abs_tol: float
    max_rel_err: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        rels = [row["rel_err"] for row in self.levels if row["rel_err"] is not None]
        self.max_rel_err = max(rels) if rels else 0.0
        ok = True
        for row in self.levels:
            if row["rel_err"] is None:
                ok &= row["abs_err"] <= self.abs_tol
            else:
                ok &= row["rel_err"] <= self.rel_tol
        self.passed = ok

    def to_json_obj(self) -> dict:
        return {
            "case": self.case,
            "params": self.params,
            "levels": self.levels,
            "max_rel_err": self.max_rel_err,
            "pass": self.passed,
        }


def build_hamiltonian(v_vals, grid: Grid1D) -> SymTridiagonal:
    """Central-difference matrix of -d^2/dx^2 + V with Dirichlet conditions."""
    v = np.asarray(v_vals, dtype=float)
    if v.shape != (grid.n_points,):
        raise DomainError("potential samples must match the interior grid")
    if not np.all(np.isfinite(v)):
        raise NonFinitePotential("potential has non-finite samples on the grid")
    h2 = grid.h * grid.h
    return SymTridiagonal(diag=2.0 / h2 + v,
                          offdiag=np.full(grid.n_points - 1, -1.0 / h2))


def check_friedrichs(v_vals, grid: Grid1D, margin: float = 0.01) -> None:
    """Reject potentials below the -1/4 endpoint bound (ill-posed oracle input).

    The 1/x^2 coefficient is estimated from the two grid nodes nearest each
    singular endpoint (0 and pi); for a regular potential the estimate is
    ~V*x^2 -> 0 and the gate passes.
    """
    v = np.asarray(v_vals, dtype=float)
    x = grid.points
    c_lo = min(v[0] * x[0] ** 2, v[1] * x[1] ** 2)
    c_hi = min(v[-1] * (math.pi - x[-1]) ** 2, v[-2] * (math.pi - x[-2]) ** 2)
    c = min(c_lo, c_hi)
    if c < -0.25 + margin:
        raise IllPosedPotential(
            f"endpoint 1/x^2 coefficient {c:.4f} below Friedrichs bound -1/4")


def _sturm_counts(diag, off2, sigmas, pivmin):
    """Number of eigenvalues below each shift, vectorized over shifts."""
    q = diag[0] - sigmas
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0.0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = diag[i] - sigmas - off2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0.0
    return count


def lowest_eigenvalues(m: SymTridiagonal, n_eigs: int, max_iter: int = 200):
    """The n_eigs smallest eigenvalues by bisection on Sturm sign counts.

    Deterministic and ascending.  Raises ConvergenceFailure if the bisection
    interval fails to contract below tolerance within max_iter sweeps.
    """
    if not 1 <= n_eigs <= m.n:
        raise DomainError("need 1 <= n_eigs <= matrix dimension")
    d = np.asarray(m.diag, dtype=float)
    e = np.asarray(m.offdiag, dtype=float)
    e2 = e * e
    radius = np.zeros(m.n)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo = float(np.min(d - radius))
    hi = float(np.max(d + radius))
    scale = max(abs(lo), abs(hi), 1.0)
    pivmin = max(np.max(e2), 1.0) * 1e-290
    tol = 16.0 * np.finfo(float).eps * scale

    los = np.full(n_eigs, lo)
    his = np.full(n_eigs, hi)
    targets = np.arange(1, n_eigs + 1)
    for _ in range(max_iter):
        mids = 0.5 * (los + his)
        counts = _sturm_counts(d, e2, mids, pivmin)
        above = counts >= targets
        his = np.where(above, mids, his)
        los = np.where(above, los, mids)
        if np.max(his - los) <= tol:
            return 0.5 * (los + his)
    raise ConvergenceFailure("Sturm bisection did not contract to tolerance")


def eigenpairs(m: SymTridiagonal, n_eigs: int, grid: Grid1D):
    """Lowest eigenvalues with inverse-iteration eigenvectors.

    Vectors have unit discrete L2 norm (h-weighted), first component of
    appreciable size positive, and relative residual ||Mv - eps v|| / ||v||
    below 1e-10 * ||M||.
    """
    vals = lowest_eigenvalues(m, n_eigs)
    n = m.n
    h = grid.h
    scale = float(np.max(np.abs(m.diag)) + 2.0 * np.max(np.abs(m.offdiag)))
    rng = np.random.default_rng(1234)  # fixed seed: deterministic output
    vecs = np.empty((n, n_eigs))
    ab = np.zeros((3, n))
    for j, lam in enumerate(vals):
        shift = lam + 1e-11 * scale
        ab[0, 1:] = m.offdiag
        ab[1, :] = m.diag - shift
        ab[2, :-1] = m.offdiag
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        for _ in range(3):
            v = solve_banded((1, 1), ab, v)
            # re-orthogonalize inside near-degenerate clusters
            for i in range(j):
                if abs(vals[i] - lam) < 1e-8 * scale:
                    v -= (vecs[:, i] @ v) * vecs[:, i] * h
            v /= np.linalg.norm(v)
        resid = np.linalg.norm(m.matvec(v) - lam * v)
        if resid > 1e-10 * scale:
            raise ConvergenceFailure(
                f"inverse iteration residual {resid:.2e} too large for level {j}")
        big = np.nonzero(np.abs(v) > 0.1 * np.max(np.abs(v)))[0][0]
        if v[big] < 0.0:
            v = -v
        vecs[:, j] = v / math.sqrt(h) / np.linalg.norm(v)
    return vals, vecs


def solve_potential(v_vals, grid: Grid1D, n_eigs: int, friedrichs: bool = True):
    """Convenience path: gate, build, and solve for the lowest eigenvalues."""
    if friedrichs:
        check_friedrichs(v_vals, grid)
    return lowest_eigenvalues(build_hamiltonian(v_vals, grid), n_eigs)


def isospectral_check(v_minus, v_plus, grid: Grid1D, n_levels: int,
                      tol: float = 5e-3) -> EigenReport:
    """Compare spec(V+)[0..m-1] with spec(V-)[1..m] level by level."""
    eps_minus = solve_potential(v_minus, grid, n_levels + 1)
    eps_plus = solve_potential(v_plus, grid, n_levels)
    rows = []
    for n in range(n_levels):
        ref = eps_minus[n + 1]
        got = eps_plus[n]
        abs_err = abs(got - ref)
        rel = abs_err / abs(ref) if abs(ref) > 1e-9 else None
        rows.append({"n": n, "eps_analytic": float(ref), "eps_numeric": float(got),
                     "abs_err": float(abs_err),
                     "rel_err": float(rel) if rel is not None else None})
    return EigenReport(case="isospectral", params={"levels": n_levels},
                       levels=rows, rel_tol=tol, abs_tol=tol)


def spectrum_report(case: str, params: dict, eps_analytic, v_vals, grid: Grid1D,
                    rel_tol: float = 5e-3, abs_tol: float = 0.01) -> EigenReport:
    """EigenReport for an analytic eps list against the oracle spectrum."""
    eps_analytic = [float(e) for e in eps_analytic]
    eps_numeric = solve_potential(v_vals, grid, len(eps_analytic))
    rows = []
    for n, (ref, got) in enumerate(zip(eps_analytic, eps_numeric)):
        abs_err = abs(got - ref)
        rel = abs_err / abs(ref) if abs(ref) > 1e-9 else None
        rows.append({"n": n, "eps_analytic": ref, "eps_numeric": float(got),
                     "abs_err": float(abs_err),
                     "rel_err": float(rel) if rel is not None else None})
    return EigenReport(case=case, params=params, levels=rows,
                       rel_tol=rel_tol, abs_tol=abs_tol)
