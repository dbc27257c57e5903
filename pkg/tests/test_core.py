import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracgap.core import (
    DIRAC,
    AngularChannel,
    PhysicalParams,
    PotentialSpec,
    RadialBasis,
    SingularEvaluationError,
    eval_potential,
    free_dirac_projector,
    free_dirac_symbol,
    gauss_legendre,
    graded_breakpoints,
    radial_sigma_grad,
)

momenta = st.lists(st.floats(-50, 50, allow_nan=False), min_size=3, max_size=3).map(np.array)
speeds = st.floats(0.1, 20.0)


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(0.0)
    assert PhysicalParams(2.0).gap == (-4.0, 4.0)
    with pytest.raises(ValueError):
        AngularChannel(0)
    assert AngularChannel(-1).orbital_l == 0
    assert AngularChannel(1).orbital_l == 1
    assert AngularChannel(-2).partner == AngularChannel(2)


def test_anticommutation_exact():
    assert DIRAC.anticommutator_defect() == 0.0
    for m in (*DIRAC.alpha, DIRAC.beta):
        assert np.array_equal(m, m.conj().T)


def test_projector_at_rest():
    P = free_dirac_projector(np.zeros(3))
    assert np.array_equal(P, np.diag([1, 1, 0, 0]).astype(complex))


def test_projector_along_x():
    p = np.array([1.0, 0.0, 0.0])
    P = free_dirac_projector(p)
    assert np.allclose(np.linalg.eigvalsh(P), [0, 0, 1, 1], atol=1e-14)
    # entrywise closed form (D(p) + E)/(2E), E = sqrt(2)
    E = np.sqrt(2.0)
    ref = np.zeros((4, 4), dtype=complex)
    ref[0, 0] = ref[1, 1] = (1 + E) / (2 * E)
    ref[2, 2] = ref[3, 3] = (E - 1) / (2 * E)
    ref[0, 3] = ref[3, 0] = ref[1, 2] = ref[2, 1] = 1 / (2 * E)
    assert np.allclose(P, ref, atol=1e-15)
    D = free_dirac_symbol(p)
    assert np.allclose(P @ D @ P, E * P, atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(momenta, speeds)
def test_projector_properties(p, c):
    params = PhysicalParams(c)
    Pp = free_dirac_projector(p, params, +1)
    Pm = free_dirac_projector(p, params, -1)
    assert np.abs(Pp @ Pp - Pp).max() <= 1e-13
    assert np.abs(Pp - Pp.conj().T).max() <= 1e-14
    assert abs(np.trace(Pp).real - 2) <= 1e-13
    assert np.abs(Pp + Pm - np.eye(4)).max() <= 1e-14


def test_projector_sign_validated():
    with pytest.raises(ValueError):
        free_dirac_projector(np.zeros(3), sign=0)


def test_coulomb_values():
    V = PotentialSpec.coulomb(1.0)
    assert eval_potential(V, 2.0) == -0.5
    assert abs(eval_potential(V, 1e6) + 1e-6) < 1e-20
    with pytest.raises(SingularEvaluationError):
        eval_potential(V, 0.0)
    with pytest.raises(ValueError):
        eval_potential(V, -1.0)


def test_regularized_and_tabulated():
    reg = PotentialSpec.regularized_coulomb(0.5, 0.1)
    assert reg(0.0) == -5.0
    r = np.linspace(0.0, 5.0, 501)
    tab = PotentialSpec.tabulated(r, -0.5 / np.maximum(r, 0.1), nu=0.5)
    assert abs(tab(0.05) + 5.0) < 1e-12
    # the bound -nu/r - K1 <= V <= K2 holds on the table
    assert np.all(-0.5 / r[1:] - tab.K1 <= tab(r[1:]) + 1e-15)
    assert np.all(tab(r) <= tab.K2)
    # continuation beyond the table decays like 1/r
    assert abs(tab(10.0) - tab(5.0) / 2) < 1e-15


def test_tabulated_file(tmp_path):
    path = tmp_path / "v.txt"
    np.savetxt(path, np.column_stack([np.linspace(0, 2, 5), -np.ones(5)]))
    spec = PotentialSpec.from_file(path)
    assert spec(1.0) == -1.0
    bad = tmp_path / "bad.txt"
    np.savetxt(bad, np.column_stack([[0, 2, 1], [0, 0, 0]]))
    with pytest.raises(ValueError):
        PotentialSpec.from_file(bad)


def test_sigma_grad_examples():
    r = np.linspace(0.1, 3, 7)
    f = np.exp(-r)
    assert np.allclose(radial_sigma_grad(AngularChannel(-1), f, -f, r), -f)
    assert radial_sigma_grad(AngularChannel(1), np.array([1.0]), np.array([1.0]), np.array([1.0]))[0] == 3.0
    # kappa = +1 on the lower component: u' + 2u/r
    u, du = r**2, 2 * r
    assert np.allclose(radial_sigma_grad(AngularChannel(1), u, du, r), du + 2 * u / r)
    with pytest.raises(SingularEvaluationError):
        radial_sigma_grad(AngularChannel(1), np.array([0.0]), np.array([1.0]), np.array([0.0]))


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_basis_boundary_and_quadrature(degree):
    basis = RadialBasis.graded(20.0, 24, degree=degree)
    vals = basis.evaluate(np.array([0.0, basis.r_max]))
    assert np.abs(vals).max() <= 1e-14
    # Gauss rule exact for degree 2d+1 on each interval
    x, w = gauss_legendre(basis.breakpoints, degree + 1)
    p = 2 * degree + 1
    assert abs(np.sum(w * x**p) - basis.r_max ** (p + 1) / (p + 1)) <= 1e-12 * basis.r_max ** (p + 1)
    # linear independence: Gram matrix is positive definite
    r, wq = basis.quadrature
    B = basis.evaluate(r)
    assert np.linalg.eigvalsh(B.T @ (wq[:, None] * r[:, None] ** 2 * B)).min() > 0


def test_graded_breakpoints_nested():
    coarse = graded_breakpoints(40.0, 25, r0=1e-4)
    fine = graded_breakpoints(40.0, 50, r0=1e-4)
    assert np.allclose(fine[::2], coarse, rtol=1e-13, atol=0)
    assert RadialBasis(fine).contains(RadialBasis(coarse))
    assert not RadialBasis(coarse).contains(RadialBasis(fine))
