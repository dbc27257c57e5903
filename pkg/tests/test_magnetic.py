import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracgap.magnetic import (
    MagneticParams,
    OutOfRangeError,
    ZBasis,
    a_B0,
    below_continuum,
    c0,
    c0_matrix,
    critical_field,
    critical_field_bounds,
    gaussian_trial,
    lambda_B0,
)


def gaussian_value(nu, B, width=1.0, rule=None):
    z, w = rule if rule is not None else ZBasis.build(B, 100).quadrature
    f, df = gaussian_trial(width)
    return lambda_B0(f(z), df(z), z, w, nu, B)


@pytest.fixture(scope="module")
def c0_09():
    return {B: c0(MagneticParams(0.9, B)) for B in (1.0, 10.0, 100.0)}


# kernel
# ---------------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-3, 20.0), st.floats(0.05, 200.0))
def test_kernel_closed_form_matches_quadrature(z, B):
    assert abs(a_B0(z, B) - a_B0(z, B, method="quad")) <= 1e-10 * a_B0(z, B)


def test_kernel_values():
    B = 2.0
    assert a_B0(0.0, B) == pytest.approx(np.sqrt(np.pi * B / 2), rel=1e-15)
    # Coulomb tail 1/|z| with first correction -1/(B z^3)
    z = 1e4
    assert abs(a_B0(z, B) * z - 1) <= 1e-8
    zs = np.linspace(0, 5, 51)
    assert np.array_equal(a_B0(zs, B), a_B0(-zs, B))
    assert np.all(np.diff(a_B0(zs, B)) < 0)
    assert np.all(a_B0(zs[1:], B) <= 1 / zs[1:])


def test_kernel_validation():
    with pytest.raises(ValueError):
        a_B0(1.0, 0.0)
    with pytest.raises(ValueError):
        a_B0(1.0, 1.0, method="series")


# lambda_B
# ---------------------------------------------------------------------------


def test_lambda_b_free_closed_form():
    z, w = ZBasis.build(1.0, 100).quadrature
    f, df = gaussian_trial(1.0)
    a = np.sum(w * f(z) ** 2)
    k = np.sum(w * df(z) ** 2)
    assert abs(lambda_B0(f(z), df(z), z, w, 0.0, 1.0) - np.sqrt(1 + k / a)) <= 1e-14


@pytest.mark.parametrize("t", [1e-3, 1.0, 1e3])
def test_lambda_b_scale_invariant(t):
    z, w = ZBasis.build(3.0, 100).quadrature
    f, df = gaussian_trial(0.7)
    a = lambda_B0(f(z), df(z), z, w, 0.6, 3.0)
    b = lambda_B0(t * f(z), t * df(z), z, w, 0.6, 3.0)
    assert abs(a - b) <= 1e-12


def test_lambda_b_grid_doubling():
    coarse = ZBasis.build(5.0, 100).quadrature
    fine = ZBasis.build(5.0, 200).quadrature
    assert abs(gaussian_value(0.7, 5.0, rule=coarse) - gaussian_value(0.7, 5.0, rule=fine)) <= 1e-8


def test_lambda_b_rejects_zero():
    z, w = ZBasis.build(1.0, 20).quadrature
    with pytest.raises(ValueError):
        lambda_B0(0 * z, 0 * z, z, w, 0.5, 1.0)


# c0
# ---------------------------------------------------------------------------


def test_params_validation():
    for nu, B in [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0)]:
        with pytest.raises(ValueError):
            MagneticParams(nu, B)


def test_c0_below_gaussian_trial(c0_09):
    for B, res in c0_09.items():
        assert res.value <= gaussian_value(0.9, B, rule=ZBasis.build(B, 100).quadrature) + 1e-12


def test_c0_nonincreasing_in_B(c0_09):
    values = [c0_09[B].value for B in (1.0, 10.0, 100.0)]
    assert values[0] >= values[1] >= values[2]
    assert values[0] == pytest.approx(0.40298, abs=1e-4)
    assert values[1] == pytest.approx(-0.41417, abs=1e-4)


def test_c0_certificates(c0_09):
    for B in (1.0, 10.0):
        res = c0_09[B]
        assert res.in_gap and res.converged
        assert res.grad_norm <= 1e-6
        assert res.tail_mass <= 1e-10
        # the minimiser is even in z
        assert np.allclose(res.f, res.f[::-1], atol=1e-5 * np.abs(res.f).max())
    # at B = 100 the level has left the gap: the result says so instead of claiming a minimum
    assert not c0_09[100.0].in_gap and c0_09[100.0].value <= -1


def test_c0_nested_refinement():
    B = 10.0
    z_max = 40.0
    values = [c0(MagneticParams(0.9, B), ZBasis.build(B, n, z_max=z_max)).value for n in (50, 100, 200)]
    assert ZBasis.build(B, 100, z_max=z_max).contains(ZBasis.build(B, 50, z_max=z_max))
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))
    assert abs(values[2] - values[1]) <= 1e-5


def test_c0_monotone_in_nu():
    values = [c0(MagneticParams(nu, 3.0)).value for nu in (0.3, 0.5, 0.7)]
    assert values[0] > values[1] > values[2]


@pytest.mark.parametrize("nu, B", [(0.5, 1.0), (0.9, 1.0), (0.9, 10.0)])
def test_c0_matrix_route_agrees(nu, B):
    basis = ZBasis.build(B, 100)
    assert abs(c0(MagneticParams(nu, B), basis).value - c0_matrix(nu, B, basis)) <= 1e-8


def test_c0_matrix_edge():
    basis = ZBasis.build(100.0, 100)
    assert c0_matrix(0.9, 100.0, basis) < -1
    assert below_continuum(0.9, 100.0, basis)
    assert not below_continuum(0.9, 1.0)


# critical field
# ---------------------------------------------------------------------------


def test_critical_field_nu09():
    cf = critical_field(0.9)
    lo, hi = critical_field_bounds(0.9)
    assert lo <= cf.B_lower <= cf.B_upper <= hi
    assert cf.value == cf.B_upper
    assert not below_continuum(0.9, 0.99 * cf.B_upper)
    assert below_continuum(0.9, 1.01 * cf.B_upper)


def test_critical_field_bounds_closed_form():
    lo, hi = critical_field_bounds(0.9)
    assert lo == pytest.approx(0.75 / 0.81)
    assert hi == pytest.approx(18 * np.pi * 0.81 / (3 * 0.81 - 2) ** 2)
    assert critical_field_bounds(0.5)[1] == float("inf")


def test_critical_field_out_of_range(monkeypatch):
    import diracgap.magnetic as mag

    monkeypatch.setattr(mag, "below_continuum", lambda *a, **k: False)
    with pytest.raises(OutOfRangeError):
        critical_field(0.5)


@pytest.mark.parametrize("nu", [0.0, 1.0, -0.5])
def test_critical_field_validation(nu):
    with pytest.raises(ValueError):
        critical_field(nu)
