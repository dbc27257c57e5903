import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracgap.core import HypothesisUnmet
from diracgap.soliton import (
    NonlinearitySpec,
    SchwarzschildSetup,
    check_les4_hypotheses,
    compact_support_criterion,
    find_excited,
    find_ground,
    find_schwarzschild_branch,
    flat_deviation,
    integrate_schwarzschild,
    integrate_soler,
    nls_ground_state,
    nonrel_rescale_check,
    shoot_soler,
)

SOLER = NonlinearitySpec.soler()
KAPPA = np.sqrt(0.75)


@pytest.fixture(scope="module")
def branches():
    return [find_excited(0.5, SOLER, n) for n in (1, 2, 3)]


@pytest.fixture(scope="module")
def nls():
    return nls_ground_state(SOLER)


# nonlinearities
# ---------------------------------------------------------------------------


def test_antiderivatives():
    assert SOLER.antiderivative_defect() <= 1e-10
    quad = NonlinearitySpec.from_callable(lambda s: s / (1 + s * s))
    assert quad.antiderivative_defect() <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.1, 5.0))
def test_power_antiderivative(theta, coupling):
    assert NonlinearitySpec.power(theta, coupling).antiderivative_defect() <= 1e-10 * coupling


def test_les4_hypotheses():
    assert check_les4_hypotheses(SOLER, 0.5)
    assert not check_les4_hypotheses(NonlinearitySpec.power(1.0, -1.0), 0.5)


# single trajectories
# ---------------------------------------------------------------------------


def test_trivial_trajectory():
    prof = integrate_soler(0.5, 0.0, SOLER)
    assert prof.classification == "localized-trivial"
    assert not np.any(prof.u) and not np.any(prof.v)


def test_small_data_undershoots():
    prof = integrate_soler(0.5, 1e-4, SOLER)
    assert prof.classification in ("undershoot", "v-sign-exit")
    assert prof.nodes_v == 0


def test_large_data_overshoots():
    assert integrate_soler(0.5, 1.5, SOLER).nodes_v >= 1
    # far above the branches the u-term dominates and blows up before any node
    assert integrate_soler(0.5, 10.0, SOLER).classification == "u-dominant-blowup"


@pytest.mark.parametrize("omega", [0.0, 1.0, 1.5, -0.2])
def test_omega_range(omega):
    with pytest.raises(ValueError):
        integrate_soler(omega, 1.0, SOLER)
    with pytest.raises(ValueError):
        find_ground(omega, SOLER)


def test_start_data():
    prof = integrate_soler(0.5, 1.2, SOLER)
    assert abs(prof.u[0]) < 1e-5 and prof.v[0] == pytest.approx(1.2, abs=1e-10)


# branches
# ---------------------------------------------------------------------------


def test_ground_state(branches):
    g = branches[0]
    assert g.classification == "localized"
    assert (g.nodes_u, g.nodes_v) == (0, 0)
    assert np.all(g.v > 0) and np.all(g.u[1:] > 0)
    assert abs(g.decay_rate / KAPPA - 1) <= 0.05


def test_branch_order_and_nodes(branches):
    xs = [b.x0 for b in branches]
    assert xs[0] < xs[1] < xs[2]
    assert [(b.nodes_u, b.nodes_v) for b in branches] == [(0, 0), (1, 1), (2, 2)]
    # bounded sequence: recorded, not asserted beyond finiteness
    assert max(xs) < 10


def test_branch_residual_and_decay(branches):
    for b in branches:
        assert b.ode_residual() <= 1e-8
        assert 0.95 <= b.decay_rate / b.expected_decay <= 1.05


def test_node_count_monotone_between_branches(branches):
    xs = np.linspace(branches[0].x0, branches[2].x0, 40)[1:-1]
    nodes = [shoot_soler(0.5, x, SOLER, 180.0)[0].nodes_v for x in xs]
    assert all(b >= a for a, b in zip(nodes, nodes[1:]))


def test_near_threshold_amplitude(nls):
    eps = 0.01
    g = find_ground(1 - eps, SOLER)
    assert (g.nodes_u, g.nodes_v) == (0, 0)
    assert abs(g.x0 / (np.sqrt(eps) * nls.phi0) - 1) <= 0.1


# compact support
# ---------------------------------------------------------------------------


def test_compact_support_examples():
    ok, val = compact_support_criterion(lambda s: -(s**-0.5))
    assert ok and abs(val - 1.0) <= 1e-8
    ok, val = compact_support_criterion(lambda s: -1.0 + 0 * s)
    assert not ok and val == float("inf")
    ok, val = compact_support_criterion(lambda s: -(s**-0.75))
    assert ok and abs(val - 1 / 3) <= 1e-8


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 0.9))
def test_compact_support_power_family(p):
    # g = -s^-p: G = s^(1-p)/(1-p), int_0^1 ds/G = (1-p)/p
    ok, val = compact_support_criterion(lambda s: -(s**-p))
    assert ok and abs(val - (1 - p) / p) <= 1e-8 * (1 - p) / p


def test_compact_support_hypothesis():
    with pytest.raises(HypothesisUnmet):
        compact_support_criterion(lambda s: s)


# Schwarzschild exterior
# ---------------------------------------------------------------------------


def test_metric():
    assert SchwarzschildSetup.metric(2.0) == 0.5
    assert SchwarzschildSetup.metric(1e15) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ValueError):
        SchwarzschildSetup(1.0)


def test_mit_bag_start():
    prof = integrate_schwarzschild(SchwarzschildSetup(5.0), 0.3)
    assert prof.u[0] == pytest.approx(-prof.v[0], abs=1e-14)
    assert prof.r[0] == 5.0


def test_flat_limit_rate():
    devs = [flat_deviation(SchwarzschildSetup(r0), 0.5, window=1 / KAPPA) for r0 in (25.0, 50.0, 100.0)]
    assert devs[1] <= 0.02
    slopes = np.diff(np.log(devs)) / np.log(2.0)
    assert np.all(np.abs(slopes + 1) <= 0.1)


def test_schwarzschild_branch_r0_2():
    prof = find_schwarzschild_branch(SchwarzschildSetup(2.0))
    assert prof.classification == "localized"
    assert prof.x0 > 0 and prof.r_end > 2.0


# nonlinear Schroedinger limit
# ---------------------------------------------------------------------------


def test_nls_ground_state(nls):
    assert nls.phi0 == pytest.approx(4.3373877, abs=1e-6)
    assert abs(nls.decay_rate / np.sqrt(2) - 1) <= 0.05
    assert np.all(nls.phi > 0) and np.all(np.diff(nls.phi) <= 0)


def test_nls_unique(nls):
    other = nls_ground_state(SOLER, scan=np.geomspace(0.5, 50, 37))
    assert abs(other.phi0 - nls.phi0) <= 1e-8


def test_nls_profile_evaluation(nls):
    assert nls(np.array([0.0]))[0] == nls.phi0
    assert nls(np.array([1e6]))[0] == 0.0


@pytest.mark.parametrize("omega", [1.0, 0.9])
def test_rescale_range(omega):
    with pytest.raises(ValueError):
        nonrel_rescale_check(omega, SOLER)
