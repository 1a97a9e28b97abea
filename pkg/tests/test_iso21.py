"""Modified iso(2,1) generators, closure constraints, Casimir reconciliation."""

import dataclasses
import math
import warnings

import numpy as np
import pytest

from toruspt.errors import DomainError, GridTooCoarse
from toruspt.geometry import TorusGeometry
from toruspt.iso21 import (
    AlgebraParams,
    algebra_spectrum,
    casimir_potential,
    closure_riccati_residuals,
    constraint_residual_77,
    energy_scalings,
    modification_U,
    sector_operator,
    st_functions,
)
from toruspt.oracle import Grid1D, solve_potential
from toruspt.susy import PureTrigPT, RationalSin, analytic_spectrum, \
    partner_potentials

GRID = np.linspace(0.1, math.pi - 0.4, 2001)
CLOSED = AlgebraParams.from_closure(c=1.0, K1=0.6)


def test_st_values():
    s, t = st_functions(-2.5, math.pi / 2.0)
    assert s == pytest.approx(0.0, abs=1e-15)
    assert t == pytest.approx(-2.5)


def test_st_constraints_are_trig_identities():
    xs = np.linspace(0.05, math.pi - 0.05, 2001)
    s, t = st_functions(-2.5, xs)
    sp = 1.0 / np.sin(xs) ** 2            # analytic S'
    tp = 2.5 * np.cos(xs) / np.sin(xs) ** 2  # analytic T'
    assert np.max(np.abs(sp - s * s - 1.0)) < 1e-10
    assert np.max(np.abs(tp - s * t)) < 1e-10


def test_modification_values():
    g = TorusGeometry(1.0, 1.0)
    assert modification_U(2.0, g, math.pi / 2.0, 1) == pytest.approx(-2.0)
    assert modification_U(2.0, g, 0.0, 1) == 0.0
    xs = np.linspace(0.3, 2.8, 101)
    u1 = modification_U(1.7, g, xs, 1)
    u2 = modification_U(0.9, g, xs, 2)
    np.testing.assert_allclose(u2 / u1, -0.9 / 1.7, atol=1e-14)
    with pytest.raises(DomainError):
        modification_U(1.0, g, 1.0, 3)


def test_closure_parameter_relations():
    res = CLOSED.closure_residuals()
    assert all(v < 1e-15 for v in res.values())
    assert CLOSED.B1 == pytest.approx(-0.8)
    assert CLOSED.mu == pytest.approx(-0.2)
    assert CLOSED.K2 == pytest.approx(-2.6)
    assert CLOSED.mu1 == pytest.approx(0.8)


def test_constraint77_closure_residual():
    assert constraint_residual_77(CLOSED, GRID) < 1e-10
    r1, r2 = closure_riccati_residuals(CLOSED, GRID)
    assert max(r1, r2) < 1e-10


def test_constraint77_vanishes_without_modification():
    p = AlgebraParams(B1=-0.8, mu=0.3, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=7.7)
    assert constraint_residual_77(p, GRID) == 0.0


@pytest.mark.parametrize("fieldname", ["K2", "mu", "B1", "K1"])
def test_constraint77_negative_controls(fieldname):
    bad = dataclasses.replace(CLOSED, **{fieldname: getattr(CLOSED, fieldname) + 0.1})
    assert constraint_residual_77(bad, GRID) > 1e-3


def test_casimir_point_value():
    p = AlgebraParams(B1=-2.5, mu=1.5, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=2.5)
    assert casimir_potential(p, math.pi / 2.0) == pytest.approx(8.0, abs=1e-13)


def test_casimir_k1_zero_is_pure_pt():
    p = AlgebraParams(B1=-2.5, mu=1.5, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=2.5)
    xs = np.linspace(0.2, math.pi - 0.2, 301)
    v = casimir_potential(p, xs)
    expect = (-0.25 + 2.0 * p.B1 * p.mu * np.cos(xs) / np.sin(xs) ** 2
              + (p.mu ** 2 + p.B1 ** 2 - 0.25) / np.sin(xs) ** 2)
    np.testing.assert_allclose(v, expect, atol=1e-12)


def test_casimir_minus_mapped_partner_is_constant():
    # map lambda = -K1, B = -B1, A = -mu - 1/2: difference is A^2 - 1/4
    xs = np.linspace(0.05, math.pi - 0.3, 2001)
    mapped = RationalSin(A=-CLOSED.mu - 0.5, B=-CLOSED.B1, lam=-CLOSED.K1,
                         geom=CLOSED.geom)
    diff = casimir_potential(CLOSED, xs) - partner_potentials(mapped, xs)[0]
    aa = (-CLOSED.mu - 0.5) ** 2
    assert np.std(diff) < 1e-10
    assert np.mean(diff) == pytest.approx(aa - 0.25, abs=1e-12)


def test_algebra_spectrum_matches_partner_tower():
    p = AlgebraParams(B1=-0.5, mu=1.5, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=2.5)
    mapped = PureTrigPT(A=-p.mu - 0.5, B=-p.B1)
    for n in range(6):
        eps, e89 = algebra_spectrum(p, n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert eps == analytic_spectrum(mapped, n)
        assert e89 == pytest.approx(math.sqrt(eps) / p.geom.a)
    assert algebra_spectrum(p, 0)[0] == 0.0


def test_algebra_spectrum_oracle():
    p = AlgebraParams(B1=-0.5, mu=1.5, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=2.5)
    grid = Grid1D(0.002, math.pi - 0.002, 2000)
    evals = solve_potential(casimir_potential(p, grid.points), grid, 4)
    shift = (p.mu + 0.5) ** 2 - 0.25
    for n in range(4):
        eps, _ = algebra_spectrum(p, n)
        got = evals[n] - shift
        assert got == pytest.approx(eps, rel=5e-3, abs=0.01)


def test_energy_scalings():
    s = energy_scalings(5.0, 2.0)
    assert s["E_eq37"] == pytest.approx(math.sqrt(5.0) / 4.0)
    assert s["E_eq89"] == pytest.approx(math.sqrt(5.0) / 2.0)


# --- sector operators -----------------------------------------------------------

def _commutator_residual(p, n, lo=0.2, hi=math.pi - 0.2):
    xg = np.linspace(lo, hi, n)
    jp_m1 = sector_operator(p, p.mu - 1.0, "raise", xg)
    jm_mu = sector_operator(p, p.mu, "lower", xg)
    jm_p1 = sector_operator(p, p.mu + 1.0, "lower", xg)
    jp_mu = sector_operator(p, p.mu, "raise", xg)
    psi = np.sin(np.pi * (xg - lo) / (hi - lo)) ** 2 \
        * (0.7 + 0.3 * np.sin(3.0 * (xg - lo) + 1.0))
    lhs = jp_m1 @ (jm_mu @ psi) - jm_p1 @ (jp_mu @ psi)
    return lhs, psi, xg


def test_commutator_closes_on_backbone():
    p = AlgebraParams(B1=-0.8, mu=0.3, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=1.3)
    lhs, psi, _ = _commutator_residual(p, 2048)
    assert np.linalg.norm(lhs + 2.0 * p.mu * psi) / np.linalg.norm(psi) < 1e-4


def test_commutator_second_order_decay():
    p = AlgebraParams(B1=-0.8, mu=0.3, K1=0.0, K2=0.0,
                      geom=TorusGeometry(1.0, 1.0), mu1=1.3)
    rs = []
    for n in (1024, 2048):
        lhs, psi, _ = _commutator_residual(p, n)
        rs.append(np.linalg.norm(lhs + 2.0 * p.mu * psi) / np.linalg.norm(psi))
    assert 3.0 < rs[0] / rs[1] < 5.5


def test_commutator_modified_defect_is_4su2():
    # with the rational modification the commutator keeps a 4 S U2 term
    lhs, psi, xg = _commutator_residual(CLOSED, 2048)
    s, _ = st_functions(CLOSED.B1, xg)
    u2 = modification_U(CLOSED.K2, CLOSED.geom, xg, 2)
    raw = np.linalg.norm(lhs + 2.0 * CLOSED.mu * psi) / np.linalg.norm(psi)
    clean = np.linalg.norm(lhs + 2.0 * CLOSED.mu * psi - 4.0 * s * u2 * psi) \
        / np.linalg.norm(psi)
    assert raw > 1.0
    assert clean < 1e-3


def test_sector_operator_guards():
    xg = np.linspace(0.2, 2.0, 300)
    with pytest.raises(DomainError):
        sector_operator(CLOSED, CLOSED.mu + 5.0, "raise", xg)
    with pytest.raises(GridTooCoarse):
        sector_operator(CLOSED, CLOSED.mu, "raise", np.linspace(0.2, 2.0, 100))


def test_sector_bookkeeping_j3():
    # J3 is the scalar mu on a sector; [J3, J+-] = +-J+- is index bookkeeping:
    # raising from mu acts with label mu + 1/2 and lands on sector mu + 1
    xg = np.linspace(0.2, math.pi - 0.2, 300)
    op_up = sector_operator(CLOSED, CLOSED.mu, "raise", xg)
    op_same = sector_operator(CLOSED, CLOSED.mu + 1.0, "lower", xg)
    # the two share the modification label mu + 1/2, hence the same
    # multiplication part (interior rows; boundary rows carry stencil terms)
    d_up = np.diag(op_up)[1:-1]
    d_same = np.diag(op_same)[1:-1]
    np.testing.assert_allclose(d_up - d_same, 0.0, atol=1e-14)
