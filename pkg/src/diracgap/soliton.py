"""Shooting solver for the radial nonlinear Dirac (Soler) system and relatives.

Flat space, ansatz psi = (v(r) e_1, i u(r) (sigma . x_hat) e_1):

    u' + 2u/r = v (g(v^2 - u^2) - (1 - omega))
    v'        = u (g(v^2 - u^2) - (1 + omega)),     u(0) = 0, v(0) = x0.

Shooting on x0: a trajectory whose u changes sign while v keeps its sign
("u turns against v") is trapped in an oscillation and counts as an
undershoot; every zero of v before that is a node.  The n-th branch x_n
separates initial values producing n - 1 nodes from those producing n.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .core import DiracGapError, HypothesisUnmet

logger = logging.getLogger(__name__)

START_STEP = 1e-6
RTOL = 1e-11
BLOWUP = 1e6
# Shooting in double precision cannot follow the decaying separatrix below
# ~sqrt(machine eps) of the initial amplitude; 1e-6 leaves a safety factor.
DECAY_THRESHOLD = 1e-6
GRAZE = 1e-12
SCAN_RANGE = (1e-6, 1e2)


class BracketNotFoundError(DiracGapError):
    """No change of node count was found in the scanned range of initial values."""


@dataclass(frozen=True)
class NonlinearitySpec:
    """Nonlinearity g with antiderivative G (G' = g, G(0) = 0)."""

    name: str
    g: Callable = field(repr=False)
    G: Callable = field(repr=False)
    theta: float | None = None

    @classmethod
    def soler(cls) -> "NonlinearitySpec":
        return cls("soler", lambda s: s, lambda s: 0.5 * np.asarray(s) ** 2, 1.0)

    @classmethod
    def power(cls, theta: float, coupling: float = 1.0) -> "NonlinearitySpec":
        """g(s) = coupling sign(s) |s|^theta, homogeneous of degree theta."""
        if theta <= 0:
            raise ValueError("theta must be positive")

        def g(s):
            s = np.asarray(s, dtype=float)
            return coupling * np.sign(s) * np.abs(s) ** theta

        def G(s):
            return coupling * np.abs(np.asarray(s, dtype=float)) ** (theta + 1) / (theta + 1)

        return cls(f"power({theta:g})", g, G, theta)

    @classmethod
    def from_callable(cls, g, G=None, name="custom", theta=None) -> "NonlinearitySpec":
        """Wrap g; G defaults to an adaptive quadrature of g from 0."""
        if G is None:

            def G(s):
                s_arr = np.atleast_1d(np.asarray(s, dtype=float))
                out = np.array([integrate.quad(g, 0.0, x, epsabs=0.0, epsrel=1e-12, limit=200)[0] for x in s_arr])
                return out if np.ndim(s) else float(out[0])

        return cls(name, g, G, theta)

    def antiderivative_defect(self, samples=None, h: float = 1e-4) -> float:
        """max |G'(s) - g(s)| with an 8th-order central difference (should be ~1e-10 or less)."""
        if samples is None:
            samples = np.linspace(0.1, 2.0, 20)
        s = np.asarray(samples, dtype=float)
        d = _central_diff(self.G, s, h)
        return float(np.max(np.abs(d - self.g(s))) + abs(float(self.G(0.0))))


# eighth-order central first-derivative stencil
_STENCIL = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])
_OFFSETS = np.arange(-4, 5)


def _central_diff(fun, x, h):
    x = np.asarray(x, dtype=float)
    return sum(c * np.asarray(fun(x + k * h)) for c, k in zip(_STENCIL, _OFFSETS) if c) / h


def check_les4_hypotheses(g: NonlinearitySpec, omega: float, s_max: float = 50.0) -> bool:
    """Sampled check: g(0) = 0, g increasing on (0, s_max), g <= 0 on s <= 0, g > 1 + omega eventually."""
    s = np.linspace(0, s_max, 2001)
    gv = np.asarray(g.g(s), dtype=float)
    neg = np.asarray(g.g(-s[1:]), dtype=float)
    return bool(
        abs(gv[0]) < 1e-14 and np.all(np.diff(gv) > 0) and np.all(neg <= 0) and gv[-1] > 1 + omega
    )


@dataclass(frozen=True)
class ShootingOutcome:
    """What a single trajectory did before it was stopped."""

    classification: str
    nodes_v: int
    nodes_u: int
    r_stop: float
    r_min_amplitude: float
    min_amplitude: float


@dataclass(frozen=True, eq=False)
class SolitonProfile:
    omega: float
    x0: float
    r: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    nodes_u: int
    nodes_v: int
    decay_rate: float
    classification: str
    r_end: float
    thresholds: dict = field(default_factory=dict, repr=False)
    dense: Callable | None = field(default=None, repr=False)
    rhs: Callable | None = field(default=None, repr=False)

    @property
    def expected_decay(self) -> float:
        return float(np.sqrt(1 - self.omega**2))

    def ode_residual(self, n_points: int = 2000, h: float = 1e-3) -> float:
        """max over r of |(u, v)' - F(r, u, v)| / (|u| + |v| + x0), derivative by
        an eighth-order stencil on the dense output."""
        if self.dense is None:
            return 0.0
        r0 = float(self.r[0]) + 5 * h
        r = np.linspace(r0, self.r_end - 5 * h, n_points)
        d = _central_diff(lambda x: self.dense(x), r, h)
        y = self.dense(r)
        f = np.array([self.rhs(ri, yi) for ri, yi in zip(r, y.T)]).T
        scale = np.abs(y[0]) + np.abs(y[1]) + self.x0
        return float(np.max(np.abs(d - f) / scale))


def _soler_rhs(omega, g):
    def rhs(r, y):
        u, v = y
        gs = g.g(v * v - u * u)
        return np.array([-2 * u / r + v * (gs - (1 - omega)), u * (gs - (1 + omega))])

    return rhs


def _taylor_start(omega, x0, g, h=START_STEP):
    """(u, v) at r = h from u(0) = 0, v(0) = x0 (the 2u/r term fixes u'(0))."""
    g0 = float(g.g(x0 * x0))
    slope = x0 * (g0 - (1 - omega)) / 3
    return np.array([slope * h, x0 + slope * (g0 - (1 + omega)) * h * h / 2])


def _march(rhs, r0, y0, r_max, x_scale, chunk=2.0):
    """Integrate in chunks until the trajectory is trapped, blows up or reaches r_max.

    Returns (ShootingOutcome, list of dense-output pieces).
    """
    nodes_v = nodes_u = 0
    pieces = []
    r, y = float(r0), np.asarray(y0, dtype=float)
    best = (np.abs(y).sum(), r)

    def ev_u(t, z):
        return z[0]

    def ev_v(t, z):
        return z[1]

    def ev_blow(t, z):
        return abs(z[0]) + abs(z[1]) - BLOWUP * x_scale

    ev_blow.terminal = True
    while r < r_max:
        end = min(r + chunk, r_max)
        sol = integrate.solve_ivp(
            rhs, (r, end), y, method="DOP853", rtol=RTOL, atol=1e-14 * x_scale,
            events=(ev_u, ev_v, ev_blow), dense_output=True,
        )
        if sol.status == -1:
            return ShootingOutcome("inconclusive", nodes_v, nodes_u, r, best[1], best[0]), pieces
        pieces.append(sol.sol)
        hits = [(t, 0) for t in sol.t_events[0]] + [(t, 1) for t in sol.t_events[1]]
        stop = None
        for t, which in sorted(hits):
            z = sol.sol(t)
            if which == 1:
                if abs(z[0]) > GRAZE * x_scale:
                    nodes_v += 1
                continue
            dz = rhs(t, z)
            if abs(z[1]) <= GRAZE * x_scale:
                continue
            if np.sign(dz[0]) == -np.sign(z[1]):
                stop = t
                break
            nodes_u += 1
        grid = np.linspace(r, stop if stop is not None else sol.t[-1], 200)
        amp = np.abs(sol.sol(grid)).sum(axis=0)
        i = int(np.argmin(amp))
        if amp[i] < best[0]:
            best = (float(amp[i]), float(grid[i]))
        if stop is not None:
            kind = "undershoot" if nodes_v == 0 else "v-sign-exit"
            return ShootingOutcome(kind, nodes_v, nodes_u, stop, best[1], best[0]), pieces
        if sol.status == 1:
            return ShootingOutcome("u-dominant-blowup", nodes_v, nodes_u, sol.t[-1], best[1], best[0]), pieces
        r, y = float(sol.t[-1]), sol.y[:, -1]
    kind = "localized" if best[0] <= DECAY_THRESHOLD * x_scale else "inconclusive"
    return ShootingOutcome(kind, nodes_v, nodes_u, r_max, best[1], best[0]), pieces


def _stitch(pieces, r_start):
    """Dense output callable over the union of the chunk pieces."""
    bounds = np.array([p.t_max for p in pieces])

    def dense(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        idx = np.minimum(np.searchsorted(bounds, r), len(pieces) - 1)
        out = np.empty((2, r.size))
        for k in np.unique(idx):
            m = idx == k
            out[:, m] = pieces[k](r[m])
        return out

    return dense


def _count_zeros(x, scale):
    keep = np.abs(x) > GRAZE * scale
    s = np.sign(x[keep])
    return int(np.sum(s[1:] != s[:-1]))


def _fit_decay(r, v, x0):
    """Slope kappa of log(r |v|) = c - kappa r over the exponential tail."""
    amp = np.abs(v) / x0
    zeros = np.where(np.sign(v[1:]) != np.sign(v[:-1]))[0]
    start = r[zeros[-1] + 1] if zeros.size else r[0]
    peak = np.argmax(amp * (r >= start))
    m = (r >= r[peak]) & (amp < 1e-2) & (amp > 1e-5)
    if m.sum() < 5:
        return float("nan")
    slope, _ = np.polyfit(r[m], np.log(r[m] * amp[m]), 1)
    return float(-slope)


def _build_profile(omega, x0, r_start, outcome, pieces, rhs, r_cut=None, n_samples=4000):
    r_end = outcome.r_min_amplitude if r_cut is None else r_cut
    dense = _stitch(pieces, r_start)
    r = np.linspace(r_start, r_end, n_samples)
    u, v = dense(r)
    return SolitonProfile(
        omega=omega,
        x0=x0,
        r=r,
        u=u,
        v=v,
        nodes_u=_count_zeros(u, x0),
        nodes_v=_count_zeros(v, x0),
        decay_rate=_fit_decay(r, v, x0),
        classification=outcome.classification,
        r_end=float(r_end),
        thresholds=dict(decay=DECAY_THRESHOLD, blowup=BLOWUP, rtol=RTOL, start_step=START_STEP),
        dense=dense,
        rhs=rhs,
    )


def _check_omega(omega):
    if not 0 < omega < 1:
        raise ValueError("omega must lie in (0, 1)")


def shoot_soler(omega: float, x0: float, g: NonlinearitySpec, r_max: float = 200.0):
    """(ShootingOutcome, dense pieces, rhs) for one initial value."""
    rhs = _soler_rhs(omega, g)
    y0 = _taylor_start(omega, x0, g)
    if np.sign(y0[0]) == -np.sign(y0[1]):
        # u leaves the origin against v: trapped from the start
        return ShootingOutcome("undershoot", 0, 0, START_STEP, START_STEP, abs(x0)), [], rhs
    out, pieces = _march(rhs, START_STEP, y0, r_max, x0)
    return out, pieces, rhs


def integrate_soler(omega: float, x0: float, g: NonlinearitySpec, r_max: float = 200.0) -> SolitonProfile:
    """Integrate from the origin and classify the trajectory."""
    _check_omega(omega)
    if x0 < 0:
        raise ValueError("x0 must be nonnegative")
    if x0 == 0:
        r = np.linspace(0, r_max, 2)
        z = np.zeros(2)
        return SolitonProfile(omega, 0.0, r, z, z, 0, 0, float("nan"), "localized-trivial", r_max)
    out, pieces, rhs = shoot_soler(omega, x0, g, r_max)
    if not pieces:
        r = np.array([0.0, START_STEP])
        y = _taylor_start(omega, x0, g)
        return SolitonProfile(omega, x0, r, np.array([0, y[0]]), np.array([x0, y[1]]), 0, 0,
                              float("nan"), out.classification, START_STEP)
    r_cut = out.r_stop if out.classification != "localized" else out.r_min_amplitude
    return _build_profile(omega, x0, START_STEP, out, pieces, rhs, r_cut)


def _bisect_branch(shoot, n, scan, x_scale_ok=True):
    """Locate x_n: the boundary between n - 1 and >= n nodes of v.

    ``shoot(x0)`` returns a ShootingOutcome.  Blowup without n nodes counts as
    fewer than n nodes.
    """
    xs = np.asarray(scan, dtype=float)
    lo = None
    for x in xs:
        o = shoot(x)
        ok = o.nodes_v >= n and o.classification != "inconclusive"
        if ok and lo is not None:
            hi = x
            break
        if not ok:
            lo = x
    else:
        raise BracketNotFoundError(f"no transition to {n} nodes in [{xs[0]:.3g}, {xs[-1]:.3g}]")
    while hi - lo > 4 * np.finfo(float).eps * hi:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        o = shoot(mid)
        if o.nodes_v >= n:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _default_scan(lo=SCAN_RANGE[0], hi=SCAN_RANGE[1], per_decade=60):
    n = int(np.ceil(np.log10(hi / lo) * per_decade)) + 1
    return np.geomspace(lo, hi, n)


def find_excited(omega: float, g: NonlinearitySpec, n: int, r_max: float | None = None, scan=None) -> SolitonProfile:
    """n-th branch (n - 1 nodes in u and v)."""
    _check_omega(omega)
    if n < 1:
        raise ValueError("branch index n must be >= 1")
    if not check_les4_hypotheses(g, omega):
        raise HypothesisUnmet(f"nonlinearity {g.name} fails the sampled branch hypotheses")
    kappa = np.sqrt(1 - omega**2)
    if r_max is None:
        r_max = 80.0 / kappa + 20.0 * n
    scan = _default_scan() if scan is None else scan
    lo, hi = _bisect_branch(lambda x: shoot_soler(omega, x, g, r_max)[0], n, scan)
    out, pieces, rhs = shoot_soler(omega, lo, g, r_max)
    if out.min_amplitude > DECAY_THRESHOLD * lo:
        logger.warning("branch %d: smallest amplitude %.3g exceeds the decay threshold", n, out.min_amplitude)
        kind = "inconclusive"
    else:
        kind = "localized"
    out = ShootingOutcome(kind, out.nodes_v, out.nodes_u, out.r_stop, out.r_min_amplitude, out.min_amplitude)
    return _build_profile(omega, lo, START_STEP, out, pieces, rhs)


def find_ground(omega: float, g: NonlinearitySpec, r_max: float | None = None, scan=None) -> SolitonProfile:
    """Ground branch: positive, node-free, exponentially decaying."""
    return find_excited(omega, g, 1, r_max, scan)


def compact_support_criterion(g, s_bar: float = 1.0, max_halvings: int = 60):
    """(bounded_support, value) for the test int_0^1 ds / G(s), G(s) = -int_0^s g.

    The integral is split into dyadic shells [2^{-k-1}, 2^{-k}]; shell
    contributions of a convergent integral decrease geometrically, while a
    non-integrable singularity makes them level off or grow.  A convergent
    sum gets its geometric remainder added in closed form.
    """
    spec = g if isinstance(g, NonlinearitySpec) else NonlinearitySpec.from_callable(g)
    s = np.geomspace(1e-12, s_bar, 200)
    if np.any(np.asarray(spec.g(s)) >= 0):
        raise HypothesisUnmet("g must be negative on (0, 1)")

    def inv_G(x):
        return -1.0 / float(spec.G(x))

    shells = []
    for k in range(max_halvings):
        a, b = s_bar * 2.0 ** (-k - 1), s_bar * 2.0 ** (-k)
        val, _ = integrate.quad(inv_G, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        shells.append(val)
    shells = np.array(shells)
    ratios = shells[-10:] / shells[-11:-1]
    q = float(np.mean(ratios))
    if q >= 0.95 or np.any(ratios >= 1):
        return False, float("inf")
    tail = shells[-1] * q / (1 - q)
    return True, float(shells.sum() + tail)


# Schwarzschild exterior
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchwarzschildSetup:
    r0: float
    coupling: float = 1.0
    omega: float = 0.5

    def __post_init__(self):
        if not self.r0 > 1:
            raise ValueError("r0 must exceed 1 (outside the horizon)")
        _check_omega(self.omega)

    @staticmethod
    def metric(r):
        """f(r) = 1 - 1/r."""
        return 1.0 - 1.0 / np.asarray(r, dtype=float)


def _schwarzschild_rhs(setup: SchwarzschildSetup):
    lam, omega = setup.coupling, setup.omega

    def rhs(r, y):
        u, v = y
        f = 1.0 - 1.0 / r
        q = np.sqrt(f)
        s = lam * (v * v - u * u)
        return np.array([(-u / r * (f + q) + v * (s - (q - omega))) / f, (-v / r * (f - q) + u * (s - (q + omega))) / f])

    return rhs


def shoot_schwarzschild(setup: SchwarzschildSetup, x0: float, r_max: float = 200.0):
    rhs = _schwarzschild_rhs(setup)
    out, pieces = _march(rhs, setup.r0, np.array([-x0, x0]), r_max, x0)
    return out, pieces, rhs


def integrate_schwarzschild(setup: SchwarzschildSetup, x0: float, r_max: float = 200.0) -> SolitonProfile:
    """Outward integration from the MIT-bag data u(r0) = -x0, v(r0) = x0."""
    if not x0 > 0:
        raise ValueError("x0 must be positive")
    out, pieces, rhs = shoot_schwarzschild(setup, x0, r_max)
    r_cut = out.r_stop if out.classification != "localized" else out.r_min_amplitude
    return _build_profile(setup.omega, x0, setup.r0, out, pieces, rhs, r_cut)


def find_schwarzschild_branch(setup: SchwarzschildSetup, n: int = 1, r_max: float | None = None, scan=None) -> SolitonProfile:
    """Bisection on x0 = v(r0) for the n-th localized branch outside the star."""
    kappa = np.sqrt(1 - setup.omega**2)
    if r_max is None:
        r_max = setup.r0 + 80.0 / kappa
    scan = _default_scan(1e-3, 1e1) if scan is None else scan
    lo, hi = _bisect_branch(lambda x: shoot_schwarzschild(setup, x, r_max)[0], n, scan)
    out, pieces, rhs = shoot_schwarzschild(setup, lo, r_max)
    kind = "localized" if out.min_amplitude <= DECAY_THRESHOLD * lo else "inconclusive"
    out = ShootingOutcome(kind, out.nodes_v, out.nodes_u, out.r_stop, out.r_min_amplitude, out.min_amplitude)
    return _build_profile(setup.omega, lo, setup.r0, out, pieces, rhs)


def flat_deviation(setup: SchwarzschildSetup, x0: float, window: float = 5.0) -> float:
    """sup |(u, v)_schw - (u, v)_flat| / sup |(u, v)_flat| on [r0, r0 + window],
    both started from the MIT-bag data (flat system with g(s) = coupling * s)."""
    r = np.linspace(setup.r0, setup.r0 + window, 2001)
    y0 = np.array([-x0, x0])
    flat = _soler_rhs(setup.omega, NonlinearitySpec.power(1.0, setup.coupling))
    opts = dict(method="DOP853", rtol=RTOL, atol=1e-14 * x0, t_eval=r)
    a = integrate.solve_ivp(_schwarzschild_rhs(setup), (r[0], r[-1]), y0, **opts).y
    b = integrate.solve_ivp(flat, (r[0], r[-1]), y0, **opts).y
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


# Nonrelativistic limit
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NLSProfile:
    phi0: float
    r: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    dphi: np.ndarray = field(repr=False)
    decay_rate: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.interp(r, self.r, self.phi, right=0.0)


def _nls_outcome(g, p, r_max=60.0):
    """'over' if phi crosses zero, 'under' if phi turns back up while positive."""

    def rhs(r, y):
        phi, d = y
        return np.array([d, -2 * d / r + 2 * phi - 2 * g.g(phi * phi) * phi])

    h = START_STEP
    curv = (2 * p - 2 * float(g.g(p * p)) * p) / 3  # phi''(0) from the radial equation
    y0 = np.array([p + curv * h * h / 2, curv * h])
    if curv >= 0:
        return "under", None, rhs

    def ev_zero(t, y):
        return y[0]

    def ev_turn(t, y):
        return y[1]

    ev_zero.terminal = True
    ev_turn.terminal = True
    ev_turn.direction = 1
    sol = integrate.solve_ivp(rhs, (h, r_max), y0, method="DOP853", rtol=RTOL, atol=1e-14 * p,
                              events=(ev_zero, ev_turn), dense_output=True)
    if sol.t_events[0].size:
        return "over", sol, rhs
    if sol.t_events[1].size:
        return "under", sol, rhs
    return "under", sol, rhs


def nls_ground_state(g: NonlinearitySpec, scan=None, r_max: float = 60.0) -> NLSProfile:
    """Positive radial solution of phi'' + 2 phi'/r = 2 phi - 2 g(phi^2) phi."""
    scan = _default_scan(1e-3, 1e2) if scan is None else np.asarray(scan, dtype=float)
    lo = hi = None
    for p in scan:
        kind = _nls_outcome(g, p, r_max)[0]
        if kind == "under":
            lo = p
        elif lo is not None:
            hi = p
            break
    if lo is None or hi is None:
        raise BracketNotFoundError("no under/overshoot transition for the NLS ground state")
    while hi - lo > 4 * np.finfo(float).eps * hi:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _nls_outcome(g, mid, r_max)[0] == "under":
            lo = mid
        else:
            hi = mid
    _, sol, _ = _nls_outcome(g, lo, r_max)
    r = np.linspace(START_STEP, sol.t[-1], 6000)
    phi, dphi = sol.sol(r)
    # keep the monotone decaying part (up to the turning point)
    stop = int(np.argmin(np.abs(phi))) + 1
    r, phi, dphi = r[:stop], phi[:stop], dphi[:stop]
    m = (phi / lo < 1e-2) & (phi / lo > 1e-5)
    slope = np.polyfit(r[m], np.log(r[m] * phi[m]), 1)[0] if m.sum() > 5 else float("nan")
    r = np.concatenate([[0.0], r])
    phi = np.concatenate([[lo], phi])
    dphi = np.concatenate([[0.0], dphi])
    return NLSProfile(float(lo), r, phi, dphi, float(-slope))


@dataclass(frozen=True)
class RescaleReport:
    eps: float
    theta: float
    x0: float
    l2_distance: float
    lower_residual: float
    amplitude_ratio: float


def nonrel_rescale_check(omega: float, g: NonlinearitySpec, nls: NLSProfile | None = None) -> RescaleReport:
    """Compare the rescaled Dirac ground state with the NLS ground state.

    With eps = 1 - omega, a = eps^(1/(2 theta)), lam = eps^(1/2), b = eps^((theta+1)/(2 theta)):
        phi_bar(y) = v(y/lam)/a,   chi_bar(y) = i u(y/lam)/b (sigma . y_hat) e_1.
    Reports ||phi_bar - phi_NLS|| and ||u_bar + phi_bar'/2|| (3D L^2 norms);
    the second is the radial form of chi_bar + (i/2)(sigma . grad) phi_bar.
    """
    _check_omega(omega)
    if g.theta is None or not 0 < g.theta <= 1:
        raise ValueError("need g homogeneous of degree theta in (0, 1]")
    eps = 1.0 - omega
    if eps > 0.05:
        raise ValueError("rescaling check requires eps = 1 - omega <= 0.05")
    theta = g.theta
    a, lam, b = eps ** (1 / (2 * theta)), np.sqrt(eps), eps ** ((theta + 1) / (2 * theta))
    if nls is None:
        nls = nls_ground_state(g)
    kappa = np.sqrt(1 - omega**2)
    scan = np.geomspace(0.2 * a * nls.phi0, 5 * a * nls.phi0, 200)
    prof = find_ground(omega, g, r_max=60.0 / kappa + 60.0 / lam, scan=scan)
    y = np.linspace(0.0, min(prof.r_end * lam, nls.r[-1]), 8000)[1:]
    uv = prof.dense(y / lam)
    u, v = uv
    rhs = np.array([prof.rhs(ri, zi) for ri, zi in zip(y / lam, uv.T)]).T
    phi_bar = v / a
    dphi_bar = rhs[1] / (a * lam)
    u_bar = u / b
    w = np.gradient(y) * y**2 * 4 * np.pi
    dist = np.sqrt(np.sum(w * (phi_bar - nls(y)) ** 2))
    resid = np.sqrt(np.sum(w * (u_bar + 0.5 * dphi_bar) ** 2))
    return RescaleReport(eps, theta, prof.x0, float(dist), float(resid), float(prof.x0 / (a * nls.phi0)))
