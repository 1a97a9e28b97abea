"""Torus geometry, reduction coefficients, and the transform round trip."""

import math

import numpy as np
import pytest

from toruspt.errors import (
    BlowUp,
    DegenerateMode,
    DomainError,
    IndexOutOfRange,
    InvalidVelocity,
    SingularGeometry,
)
from toruspt.geometry import (
    ModeParams,
    TorusGeometry,
    christoffel,
    effective_coefficients,
    prefactor_f,
    profile_radius,
    reduced_potential,
    reduced_potential_grid,
    solve_g_transform,
    spin_connection_coeff,
)
from toruspt.susy import PTCoefficients

VF_ONE = lambda x: np.ones_like(np.asarray(x, dtype=float))
VF_ZERO = lambda x: np.zeros_like(np.asarray(x, dtype=float))


def test_profile_radius_direct():
    r, rp, rpp = profile_radius(TorusGeometry(1.0, 1.0), 0.0)
    assert (r, rp, rpp) == (2.0, 0.0, -1.0)
    r, rp, rpp = profile_radius(TorusGeometry(1.0, 2.0), math.pi / 2.0)
    assert r == pytest.approx(2.0)
    assert rp == pytest.approx(-1.0)
    assert rpp == pytest.approx(0.0, abs=1e-15)


def test_horn_torus_degenerate_point():
    r, _, _ = profile_radius(TorusGeometry(1.0, 1.0), math.pi)
    assert r == pytest.approx(0.0, abs=1e-15)


def test_christoffel_values():
    g1_22, g2_12 = christoffel(TorusGeometry(1.0, 2.0), math.pi / 2.0)
    assert g2_12 == pytest.approx(-0.5)
    assert g1_22 == pytest.approx(2.0)


def test_christoffel_vanishes_at_zero():
    g1_22, g2_12 = christoffel(TorusGeometry(1.3, 2.7), 0.0)
    assert g1_22 == 0.0 and g2_12 == 0.0


def test_christoffel_odd():
    xs = np.linspace(0.1, 1.4, 37)
    g = TorusGeometry(1.3, 2.7)
    f1, f2 = christoffel(g, xs)
    m1, m2 = christoffel(g, -xs)
    np.testing.assert_allclose(m1, -f1, atol=1e-15)
    np.testing.assert_allclose(m2, -f2, atol=1e-15)


def test_christoffel_singular_geometry():
    with pytest.raises(SingularGeometry):
        christoffel(TorusGeometry(1.0, 1.0), math.pi)


def test_spin_connection_value_and_identity():
    assert spin_connection_coeff(TorusGeometry(1.0, 1.0), math.pi / 2.0) == \
        pytest.approx(-0.5)
    assert spin_connection_coeff(TorusGeometry(2.0, 3.0), 0.0) == 0.0
    rng = np.random.default_rng(3)
    xs = rng.uniform(0.05, math.pi - 0.05, 100)
    g = TorusGeometry(1.0, 2.0)
    _, g2_12 = christoffel(g, xs)
    np.testing.assert_allclose(spin_connection_coeff(g, xs), g2_12 / 2.0,
                               atol=1e-15)


def test_effective_coefficients_k0():
    g = TorusGeometry(1.0, 1.0)
    u1 = effective_coefficients(g, ModeParams(0.0, 1), math.pi / 2.0, VF_ONE, VF_ZERO)
    u2 = effective_coefficients(g, ModeParams(0.0, 2), math.pi / 2.0, VF_ONE, VF_ZERO)
    assert u1 == pytest.approx(-1.25)
    assert u2 == pytest.approx(-1.25)


def test_effective_coefficients_k_linear_difference():
    g = TorusGeometry(1.0, 2.0)
    x = math.pi / 3.0
    u1 = effective_coefficients(g, ModeParams(1.0, 1), x, VF_ONE, VF_ZERO)
    u2 = effective_coefficients(g, ModeParams(1.0, 2), x, VF_ONE, VF_ZERO)
    # independent re-evaluation of the two k-linear terms with V_F' = 0
    expect = -4.0 * 1.0 * (-math.sqrt(3.0) / 2.0) / 2.5 ** 3
    assert u1 - u2 == pytest.approx(expect, rel=1e-12)


def test_effective_coefficients_rejects_bad_velocity():
    g = TorusGeometry(1.0, 1.0)
    with pytest.raises(InvalidVelocity):
        effective_coefficients(g, ModeParams(1.0, 1), 1.0, VF_ZERO, VF_ZERO)


PT_TARGET = PTCoefficients(2.25, -1.5, -4.0)  # the A=-2, B=0.5 family


@pytest.mark.parametrize("component,n_points,h0,budget", [
    (1, 4001, 0.1, 1e-6),
    (2, 6001, 0.3, 1e-6),
])
def test_roundtrip_reproduces_target(component, n_points, h0, budget):
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, n_points)
    mode = ModeParams(1.0, component)
    tr = solve_g_transform(g, mode, PT_TARGET, xs, h0=h0)
    got = reduced_potential_grid(g, mode, tr)
    want = PT_TARGET(xs[1:-1])
    assert np.max(np.abs(got - want)) < budget


def test_transform_invariants():
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, 1001)
    tr = solve_g_transform(g, ModeParams(1.0, 1), PT_TARGET, xs, h0=0.1)
    assert np.all(tr.g_prime > 0.0)
    assert np.all(np.diff(tr.g) > 0.0)
    np.testing.assert_allclose(tr.fermi_velocity * tr.g_prime, 1.0, atol=1e-12)
    assert np.all(tr.prefactor > 0.0)


def test_reduced_potential_pointwise_matches_grid():
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, 501)
    mode = ModeParams(1.0, 1)
    tr = solve_g_transform(g, mode, PT_TARGET, xs, h0=0.1)
    grid_vals = reduced_potential_grid(g, mode, tr)
    for i in (1, 137, 499):
        assert reduced_potential(g, mode, tr, i) == pytest.approx(grid_vals[i - 1],
                                                                  abs=1e-12)
    with pytest.raises(IndexOutOfRange):
        reduced_potential(g, mode, tr, 0)
    with pytest.raises(IndexOutOfRange):
        reduced_potential(g, mode, tr, 500)


def test_component_sign_identity():
    # V1 + V2 at fixed transform equals twice the k^2 term
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, 1001)
    tr = solve_g_transform(g, ModeParams(1.0, 1), PT_TARGET, xs, h0=0.1)
    v1 = reduced_potential_grid(g, ModeParams(1.0, 1), tr)
    v2 = reduced_potential_grid(g, ModeParams(1.0, 2), tr)
    x_in = xs[1:-1]
    r = 1.0 + np.cos(x_in)
    expect = 2.0 / (r ** 4 * tr.g_prime[1:-1] ** 2)
    np.testing.assert_allclose(v1 + v2, expect, rtol=1e-10)


def test_k0_rejects_nonzero_target():
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, 101)
    with pytest.raises(DegenerateMode):
        solve_g_transform(g, ModeParams(0.0, 1), PT_TARGET, xs)


def test_k0_zero_target_trivial_transform():
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, 101)
    tr = solve_g_transform(g, ModeParams(0.0, 1), PTCoefficients(0.0, 0.0, 0.0),
                           xs, h0=0.7)
    np.testing.assert_allclose(tr.g_prime, 0.7)
    v = reduced_potential_grid(g, ModeParams(0.0, 1), tr)
    np.testing.assert_allclose(v, 0.0, atol=1e-12)


def test_blowup_detected():
    # default slope drives 1/g'^2 through zero for this target
    g = TorusGeometry(1.0, 1.0)
    xs = np.linspace(0.3, 2.4, 1001)
    with pytest.raises(BlowUp):
        solve_g_transform(g, ModeParams(1.0, 1), PT_TARGET, xs, h0=1.0)


def test_grid_validation():
    g = TorusGeometry(1.0, 1.0)
    with pytest.raises(DomainError):
        solve_g_transform(g, ModeParams(1.0, 1), PT_TARGET,
                          np.linspace(-0.1, 2.0, 101))


def test_prefactor_values_and_identity():
    g = TorusGeometry(1.0, 1.0)
    assert prefactor_f(g, 0.0) == pytest.approx(math.exp(-0.25), rel=1e-15)
    # essential decay toward the horn point
    assert prefactor_f(g, math.pi - 1e-3) < 1e-100
    xs = np.linspace(0.3, 2.4, 301)
    tr = solve_g_transform(g, ModeParams(1.0, 1), PT_TARGET, xs, h0=0.1)
    r = 1.0 + np.cos(xs)
    ident = tr.prefactor * np.sqrt(tr.g_prime * tr.fermi_velocity) \
        * np.exp(1.0 / (2.0 * r))
    np.testing.assert_allclose(ident, 1.0, atol=1e-12)


def test_geometry_validation():
    with pytest.raises(DomainError):
        TorusGeometry(-1.0, 1.0)
    with pytest.raises(DomainError):
        TorusGeometry(1.0, 0.0)
    assert TorusGeometry(1.0, 1.0).equal_radii
    assert not TorusGeometry(1.0, -1.0).equal_radii
    with pytest.raises(DomainError):
        ModeParams(1.0, 3)
