import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from ppcat import propagator as pr
from ppcat.errors import DegenerateExponents, InvalidStep, ValidationError

zetas = st.floats(0.0, 2.0)
gammas = st.floats(0.0, 0.99)
phases = st.floats(0.0, 2 * math.pi)

# scipy matrix exponential of the 4x4 generator at zeta = gamma = 0.9, phi2 = 0
FROZEN_09 = np.array(
    [
        2.492529158597256, -2.429641504767811j, -1.190804447766284j, 0.852970689758515,
        -1.190804447766284j, -0.852970689758515, 0.597038736911667, -0.216590601379487j,
    ]
)


def test_exponents_values():
    assert pr.exponents(0.0) == (2, 0)
    assert pr.exponents(1.0) == (1, 1)
    x1, x2 = pr.exponents(0.9)
    assert x1 == pytest.approx(1.435889894354067, abs=1e-12)
    assert x2 == pytest.approx(0.564110105645933, abs=1e-12)


@given(st.floats(0.0, 3.0))
def test_exponent_invariants(g):
    x1, x2 = pr.exponents(g)
    assert abs(x1 + x2 - 2) < 1e-12
    assert abs(x1 * x2 - g * g) < 1e-12


def test_frozen_reference():
    p = pr.coeffs_closed_form(pr.CouplingConfig(0.9, 0.9))
    np.testing.assert_allclose(p.as_array(), FROZEN_09, atol=1e-12)


def test_printed_forms_of_k1_and_m3_hold():
    z, g = 0.7, 0.6
    x1, x2 = (v.real for v in pr.exponents(g))
    k1 = ((x2**2 + g**2) * math.cosh(x2 * z) - (x1**2 + g**2) * math.cosh(x1 * z)) / (x2**2 - x1**2)
    p = pr.coeffs_closed_form(pr.CouplingConfig(z, g))
    assert p.k1 == pytest.approx(k1, abs=1e-13)


def test_m4_vanishes_at_origin_and_uses_sinh():
    z, g = 0.8, 0.6
    x1, x2 = (v.real for v in pr.exponents(g))
    m4 = 2j * g**2 / (x1 * x2 * (x2**2 - x1**2)) * (x2 * math.sinh(x1 * z) - x1 * math.sinh(x2 * z))
    assert pr.coeffs_closed_form(pr.CouplingConfig(z, g)).m4 == pytest.approx(m4, abs=1e-13)
    assert pr.coeffs_closed_form(pr.CouplingConfig(0.0, g)).m4 == 0


def test_decoupled_limit():
    for z in np.arange(1, 9) * 0.25:
        p = pr.coeffs_closed_form(pr.CouplingConfig(z, 0.0))
        np.testing.assert_allclose(
            p.as_array(), [math.cosh(2 * z), -1j * math.sinh(2 * z), 0, 0, 0, 0, 1, 0], atol=1e-10 * math.cosh(2 * z)
        )


@given(st.floats(0.0, 1.5), phases)
def test_identity_at_origin(g, ph):
    if abs(g - 1) < 1e-3:
        g = 0.5
    p = pr.coeffs_closed_form(pr.CouplingConfig(0.0, g, ph))
    assert np.max(np.abs(p.as_array() - pr.IDENTITY.as_array())) < 1e-12


@given(zetas, gammas, phases)
def test_commutators(z, g, ph):
    assert pr.max_defect(pr.propagator_coeffs(pr.CouplingConfig(z, g, ph))) < 1e-10


def test_identity_has_no_defect():
    assert pr.commutator_defects(pr.IDENTITY) == (0, 0, 0, 0)
    assert pr.max_defect(pr.coeffs_closed_form(pr.CouplingConfig(1.0, 0.0))) < 1e-12


@given(zetas, gammas, phases)
def test_matches_matrix_exponential(z, g, ph):
    p = pr.propagator_coeffs(pr.CouplingConfig(z, g, ph))
    T = expm(pr.generator_matrix(g, ph) * z)
    np.testing.assert_allclose(p.as_matrix(), T, atol=1e-9 * max(1.0, np.abs(T).max()))


@given(st.floats(1.01, 3.0), st.floats(0.0, 2.0))
def test_oscillatory_regime(g, z):
    p = pr.coeffs_closed_form(pr.CouplingConfig(z, g))
    np.testing.assert_allclose(p.as_matrix(), expm(pr.generator_matrix(g) * z), atol=1e-9)


@given(zetas, gammas, phases, phases)
def test_phase_covariance(z, g, ph, d):
    a = pr.propagator_coeffs(pr.CouplingConfig(z, g, ph)).as_array()
    b = pr.propagator_coeffs(pr.CouplingConfig(z, g, ph + d)).as_array()
    powers = np.array([0, 1, -1, 2, 1, 2, 0, 3])
    np.testing.assert_allclose(b, a * np.exp(1j * powers * d), atol=1e-9 * max(1, np.abs(a).max()))


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), gammas, phases)
def test_semigroup(z1, z2, g, ph):
    f = lambda z: pr.propagator_coeffs(pr.CouplingConfig(z, g, ph))
    np.testing.assert_allclose(f(z1 + z2).as_array(), f(z2).compose(f(z1)).as_array(), atol=1e-9)


def test_matrix_round_trip():
    p = pr.coeffs_closed_form(pr.CouplingConfig(0.6, 0.4, 1.0))
    assert pr.PropagatorCoeffs.from_matrix(p.as_matrix()) == p


def test_ode_decoupled():
    p = pr.coeffs_ode(pr.CouplingConfig(1.0, 0.0), step=1e-4)
    assert abs(p.k1 - 3.762195691) < 1e-9
    assert abs(p.k1 - math.cosh(2)) < 1e-10


def test_ode_identity_and_steps():
    assert pr.coeffs_ode(pr.CouplingConfig(0.0, 0.9)) == pr.IDENTITY
    assert pr.default_step(1.0) == pytest.approx(1e-3)
    assert pr.default_step(0.9995) <= 1e-3
    for bad in (0.0, -1e-3, 2.0):
        with pytest.raises(InvalidStep):
            pr.coeffs_ode(pr.CouplingConfig(1.0, 0.5), step=bad)


def test_ode_fourth_order():
    c = pr.CouplingConfig(1.5, 0.9)
    a, b = pr.coeffs_ode(c, 1e-3).as_array(), pr.coeffs_ode(c, 5e-4).as_array()
    richardson = b + (b - a) / 15
    ratio = np.abs(a - richardson).max() / np.abs(b - richardson).max()
    assert 12 < ratio < 20


def test_closed_form_vs_ode_example():
    c = pr.CouplingConfig(0.9, 0.9)
    a, b = pr.coeffs_closed_form(c).as_array(), pr.coeffs_ode(c).as_array()
    nz = np.abs(b) > 0
    assert np.max(np.abs(a - b)[nz] / np.abs(b)[nz]) < 1e-8


def test_degenerate_dispatch_and_guard():
    with pytest.raises(DegenerateExponents):
        pr.coeffs_closed_form(pr.CouplingConfig(1.0, 1.0))
    assert pr.coeffs_degenerate(pr.CouplingConfig(0.0, 1.0)) == pr.IDENTITY
    c = pr.CouplingConfig(0.5, 1.0)
    np.testing.assert_allclose(pr.propagator_coeffs(c).as_array(), pr.coeffs_ode(c).as_array(), rtol=1e-8, atol=1e-12)


def test_degenerate_continuity():
    lo = pr.propagator_coeffs(pr.CouplingConfig(1.0, 1 - 1e-7)).as_array()
    hi = pr.propagator_coeffs(pr.CouplingConfig(1.0, 1 + 1e-7)).as_array()
    assert np.max(np.abs(lo - hi)) < 1e-5
    inside = pr.coeffs_degenerate(pr.CouplingConfig(1.0, 1 - 3e-7)).as_array()
    outside = pr.coeffs_closed_form(pr.CouplingConfig(1.0, 1 - 3e-7)).as_array()
    assert np.max(np.abs(inside - outside)) < 1e-6


@pytest.mark.parametrize("kw", [dict(zeta=-0.1), dict(zeta=math.inf), dict(gamma=-1.0), dict(gamma=math.nan), dict(phi2=math.inf)])
def test_config_validation(kw):
    base = dict(zeta=1.0, gamma=0.5)
    base.update(kw)
    with pytest.raises(ValidationError):
        pr.CouplingConfig(**base)
