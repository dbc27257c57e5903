"""Eigenvalues of D_c + V inside the spectral gap by the reduced min-max method.

For a trial energy ``lam`` the upper-component Galerkin matrix

    A_ij(lam) = int [ c^2 (d_k phi_i)(d_k phi_j) / (lam + c^2 - V)
                      + (V + c^2 - lam) phi_i phi_j ] r^2 dr

is Loewner-nonincreasing in ``lam``; the k-th gap level of the basis is the
unique zero of its k-th eigenvalue.  Basis functions are rescaled by a fixed
(lam-independent) diagonal so that splines of very different size give
matrix entries of comparable magnitude.  A congruence does not change the
inertia of A, so the zeros are those of the unscaled matrix.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import linalg, optimize

from .core import (
    AngularChannel,
    DiracGapError,
    PhysicalParams,
    PotentialSpec,
    RadialBasis,
    RadialProfile,
    radial_sigma_grad,
)

logger = logging.getLogger(__name__)

ROOT_TOL = 1e-9
EDGE = 1e-8


class GapCollapseError(DiracGapError):
    """lam + c^2 - V is nonpositive somewhere: lam is too close to -c^2."""


class NoEigenvalueError(DiracGapError):
    """The requested level has no zero inside the spectral gap."""


class NotNestedError(DiracGapError, ValueError):
    """A basis sequence is not strictly nested."""


@dataclass(frozen=True, eq=False)
class GapMatrix:
    """A_n(lam) in lower banded storage, ``band[o, j] = A[j + o, j]``."""

    lam: float
    band: np.ndarray
    channel: AngularChannel
    basis: RadialBasis = field(repr=False)
    potential: PotentialSpec = field(repr=False)

    @property
    def n(self) -> int:
        return self.band.shape[1]

    @cached_property
    def dense(self) -> np.ndarray:
        n, width = self.n, self.band.shape[0]
        out = np.zeros((n, n))
        for o in range(width):
            idx = np.arange(n - o)
            out[idx + o, idx] = self.band[o, : n - o]
            out[idx, idx + o] = self.band[o, : n - o]
        return out


@dataclass(frozen=True)
class GapLevelResult:
    k: int
    lam: float
    n: int
    kappa: int
    residual: float
    bracket_lo: float
    bracket_hi: float
    history: tuple = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    degenerate: bool = False


@dataclass(frozen=True)
class ConvergenceTable:
    k: int
    ns: tuple
    values: tuple
    error_estimate: float
    monotone: bool

    @property
    def value(self) -> float:
        return self.values[-1]


@dataclass(frozen=True)
class LambdaTResult:
    value: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class MinLambdaTResult:
    value: float
    coefficients: np.ndarray = field(repr=False)
    iterations: int = 0
    grad_norm: float = float("nan")
    converged: bool = True
    interior: bool = True


@dataclass(frozen=True)
class NonrelSweep:
    c: tuple
    mu: tuple
    mu_inf: float
    slope: float


def coulomb_gamma(nu: float, params: PhysicalParams = PhysicalParams(), kappa: int = -1) -> float:
    """Exponent gamma = sqrt(kappa^2 - nu^2/c^2) of the r^(gamma-1) behaviour at 0."""
    return float(np.sqrt(kappa**2 - (nu / params.c) ** 2))


def gap_basis(
    r_max: float, n: int, gamma: float = 1.0, degree: int = 2
) -> RadialBasis:
    """Graded B-spline basis tuned for r^(gamma - 1) behaviour at the origin."""
    r0 = r_max * 10.0 ** (-2.4 - 2.0 / gamma)
    return RadialBasis.graded(r_max, n, degree, r0=r0, scale=r_max / 2)


def decay_radius(lam: float, params: PhysicalParams = PhysicalParams(), floor: float = 1e-12) -> float:
    """Radius at which exp(-sqrt(c^4 - lam^2)/c r) drops below ``floor`` (plus 10%)."""
    c = params.c
    rate = np.sqrt(c**4 - lam**2) / c
    return 1.1 * np.log(1 / floor) / rate


class GapProblem:
    """Precomputed quadrature data for one (basis, potential, c, kappa)."""

    def __init__(
        self,
        basis: RadialBasis,
        potential: PotentialSpec,
        params: PhysicalParams = PhysicalParams(),
        channel: AngularChannel = AngularChannel(-1),
    ):
        self.basis, self.potential, self.params, self.channel = basis, potential, params, channel
        r, w = basis.quadrature
        vals, ders = basis.collocation
        self.r, self.V = r, potential(r)
        self.wr2 = w * r**2
        dk = radial_sigma_grad(channel, vals, ders, r[:, None])
        c2 = params.c**2
        # Diagonal of the lam-independent SPD form K(lam = c^2) + c^2 M.
        ref_den = 2 * c2 - np.minimum(self.V, 0.0) + max(potential.K2, 0.0)
        scale = np.sum(self.wr2[:, None] * (c2 * dk**2 / ref_den[:, None] + c2 * vals**2), axis=0)
        self.scale = 1.0 / np.sqrt(scale)
        self.P = vals * self.scale
        self.D = dk * self.scale
        self.width = basis.degree + 1
        self.lower = potential.K2 - c2 + EDGE
        self.upper = c2 - EDGE

    @property
    def n(self) -> int:
        return self.P.shape[1]

    def _weights(self, lam: float):
        c2 = self.params.c**2
        den = lam + c2 - self.V
        if np.any(den <= 0):
            raise GapCollapseError(f"lam + c^2 - V <= 0 at some node for lam = {lam:.12g}")
        return self.wr2 * c2 / den, self.wr2 * (self.V + c2 - lam), den

    def _band(self, wk, wm) -> np.ndarray:
        n = self.n
        band = np.zeros((self.width, n))
        for o in range(self.width):
            band[o, : n - o] = np.einsum(
                "q,qj,qj->j", wk, self.D[:, o:], self.D[:, : n - o]
            ) + np.einsum("q,qj,qj->j", wm, self.P[:, o:], self.P[:, : n - o])
        return band

    def matrix(self, lam: float) -> GapMatrix:
        wk, wm, _ = self._weights(lam)
        return GapMatrix(float(lam), self._band(wk, wm), self.channel, self.basis, self.potential)

    def dmatrix(self, lam: float) -> np.ndarray:
        """Banded d/dlam A(lam) (negative definite)."""
        wk, _, den = self._weights(lam)
        return self._band(-wk / den, -self.wr2)

    def mu(self, lam: float, k: int, vectors: bool = False):
        band = self.matrix(lam).band
        if vectors:
            lo = max(k - 2, 0)
            hi = min(k, self.n - 1)
            ev, vec = linalg.eig_banded(band, lower=True, select="i", select_range=(lo, hi))
            return ev, vec, k - 1 - lo
        return float(
            linalg.eigvals_banded(band, lower=True, select="i", select_range=(k - 1, k - 1))[0]
        )

    def solve(self, k: int, tol: float = ROOT_TOL, check_monotone: bool = False) -> GapLevelResult:
        if not 1 <= k <= self.n:
            raise IndexError(f"level {k} outside 1..{self.n}")
        lo, hi = self.lower, self.upper
        history = []

        def mu(lam):
            m = self.mu(lam, k)
            history.append((lam, m))
            return m

        mu_lo, mu_hi = mu(lo), mu(hi)
        if mu_hi >= 0:
            raise NoEigenvalueError(f"level {k} has no zero in the gap (mu(c^2-) = {mu_hi:.3e})")
        if mu_lo <= 0:
            raise GapCollapseError(f"level {k} lies below the bracket start {lo:.6g}")
        if check_monotone:
            grid = np.linspace(lo, hi, 20)
            values = [self.mu(x, k) for x in grid]
            if np.any(np.diff(values) > 1e-12 * max(1.0, np.max(np.abs(values)))):
                raise DiracGapError("mu_k(lam) is not monotone on the bracket")

        c2 = self.params.c**2
        while hi - lo > 1e-8 * c2:
            mid = 0.5 * (lo + hi)
            if mu(mid) > 0:
                lo = mid
            else:
                hi = mid

        lam = 0.5 * (lo + hi)
        ev, vec, idx = self.mu(lam, k, vectors=True)
        gaps = np.abs(np.delete(ev, idx) - ev[idx])
        degenerate = bool(gaps.size and gaps.min() < 1e-12)
        if degenerate or gaps.size and gaps.min() < 1e-10:
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                lo, hi = (mid, hi) if mu(mid) > 0 else (lo, mid)
            lam = 0.5 * (lo + hi)
            ev, vec, idx = self.mu(lam, k, vectors=True)
        else:
            for _ in range(6):
                x = vec[:, idx]
                slope = float(x @ _band_matvec(self.dmatrix(lam), x))
                step = -ev[idx] / slope
                new = lam + step
                if not lo <= new <= hi:
                    break
                lam = new
                ev, vec, idx = self.mu(lam, k, vectors=True)
                history.append((lam, float(ev[idx])))
                if abs(step) <= 0.1 * tol:
                    break
        return GapLevelResult(
            k=k,
            lam=float(lam),
            n=self.n,
            kappa=self.channel.kappa,
            residual=abs(float(ev[idx])),
            bracket_lo=float(lo),
            bracket_hi=float(hi),
            history=tuple(history),
            coefficients=vec[:, idx] * self.scale,
            degenerate=degenerate,
        )


def _band_matvec(band: np.ndarray, x: np.ndarray) -> np.ndarray:
    n = x.size
    y = band[0] * x
    for o in range(1, band.shape[0]):
        y[o:] += band[o, : n - o] * x[: n - o]
        y[: n - o] += band[o, : n - o] * x[o:]
    return y


def assemble_gap_matrix(
    lam: float,
    basis: RadialBasis,
    potential: PotentialSpec,
    params: PhysicalParams = PhysicalParams(),
    channel: AngularChannel = AngularChannel(-1),
    scaled: bool = False,
) -> GapMatrix:
    """A_n(lam) for the raw B-spline basis (or the rescaled one if ``scaled``)."""
    prob = GapProblem(basis, potential, params, channel)
    mat = prob.matrix(lam)
    if scaled:
        return mat
    s = 1.0 / prob.scale
    band = mat.band.copy()
    for o in range(band.shape[0]):
        band[o, : prob.n - o] *= s[o:] * s[: prob.n - o]
    return GapMatrix(mat.lam, band, channel, basis, potential)


def kth_matrix_eigenvalue(A, k: int) -> float:
    """k-th smallest eigenvalue (1-based) of a symmetric matrix or GapMatrix."""
    if isinstance(A, GapMatrix):
        if not 1 <= k <= A.n:
            raise IndexError(f"k = {k} outside 1..{A.n}")
        return float(linalg.eigvals_banded(A.band, lower=True, select="i", select_range=(k - 1, k - 1))[0])
    A = np.asarray(A, dtype=float)
    if not 1 <= k <= A.shape[0]:
        raise IndexError(f"k = {k} outside 1..{A.shape[0]}")
    return float(linalg.eigh(A, eigvals_only=True, subset_by_index=[k - 1, k - 1])[0])


def solve_level(
    k: int,
    basis: RadialBasis,
    potential: PotentialSpec,
    params: PhysicalParams = PhysicalParams(),
    channel: AngularChannel = AngularChannel(-1),
    tol: float = ROOT_TOL,
    check_monotone: bool = False,
) -> GapLevelResult:
    """k-th gap eigenvalue lam_{k,n} of D_c + V in the span of ``basis``."""
    return GapProblem(basis, potential, params, channel).solve(k, tol, check_monotone)


def solve_levels(k_max, basis, potential, params=PhysicalParams(), channel=AngularChannel(-1), tol=ROOT_TOL, below=None):
    """All levels 1..k_max (stopping at the first missing one or above ``below``)."""
    prob = GapProblem(basis, potential, params, channel)
    out = []
    for k in range(1, k_max + 1):
        try:
            res = prob.solve(k, tol)
        except NoEigenvalueError:
            break
        if below is not None and res.lam >= below:
            break
        out.append(res)
    return out


def converge_levels(
    k: int,
    bases,
    potential: PotentialSpec,
    params: PhysicalParams = PhysicalParams(),
    channel: AngularChannel = AngularChannel(-1),
    tol: float = ROOT_TOL,
) -> ConvergenceTable:
    """lam_{k,n} over a nested basis sequence, with estimate lam_{k,n/2} - lam_{k,n}."""
    bases = list(bases)
    if len(bases) < 2:
        raise ValueError("need at least two bases")
    for coarse, fine in zip(bases, bases[1:]):
        if not fine.contains(coarse):
            raise NotNestedError("basis sequence is not nested")
    values = [solve_level(k, b, potential, params, channel, tol).lam for b in bases]
    monotone = all(b <= a + 2 * tol for a, b in zip(values, values[1:]))
    if not monotone:
        logger.warning("lam_{k,n} sequence increases under refinement: %s", values)
    return ConvergenceTable(
        k=k,
        ns=tuple(b.size for b in bases),
        values=tuple(values),
        error_estimate=values[-2] - values[-1],
        monotone=monotone,
    )


def _lambda_T_root(a, kin, pot, V, den_shift, c2, tol=1e-12):
    """Root of h(lam) = lam*a - sum(kin/(c^2 - V + lam)) - pot (h increasing).

    ``kin`` and ``pot`` are already weighted by the quadrature; ``den_shift`` is
    the smallest admissible lam (denominators vanish there).  Returns
    (root, function evaluations, relative residual).
    """

    def h(lam):
        return lam * a - np.sum(kin / (c2 - V + lam)) - pot

    lo = den_shift + 1e-15 * max(1.0, abs(den_shift))
    if h(lo) >= 0:
        return lo, 1, 0.0
    hi = den_shift + max(1.0, c2)
    while h(hi) <= 0:
        hi = den_shift + 2 * (hi - den_shift)
    lam, info = optimize.brentq(h, lo, hi, xtol=tol * 1e-3, rtol=1e-15, full_output=True)
    den = c2 - V + lam
    lam -= h(lam) / (a + np.sum(kin / den**2))
    scale = lam * a + abs(pot) + np.sum(kin / (c2 - V + lam))
    return lam, info.function_calls + 1, abs(h(lam)) / scale


def lambda_T(
    phi: RadialProfile,
    potential: PotentialSpec,
    params: PhysicalParams = PhysicalParams(),
    tol: float = 1e-12,
) -> LambdaTResult:
    """Scalar lam with lam |phi|^2 = int c^2|d phi|^2/(c^2 - V + lam) + (c^2 + V)|phi|^2."""
    c2 = params.c**2
    a = phi.norm2()
    if not a > 0:
        raise ValueError("lambda_T of the zero function is undefined")
    V = potential(phi.r)
    kin = phi.w * phi.r**2 * c2 * phi.sigma_grad**2
    pot = float(np.sum(phi.w * phi.r**2 * (c2 + V) * phi.f**2))
    if potential.kind == "coulomb" and potential.nu == 0 or np.all(V == 0):
        k = float(np.sum(kin))
        lam = float(np.sqrt(c2**2 + k / a))
        return LambdaTResult(lam, 0, 0.0)
    shift = float(np.max(V)) - c2
    lam, it, res = _lambda_T_root(a, kin, pot, V, shift, c2, tol)
    return LambdaTResult(float(lam), it, float(res))


def min_lambda_T(
    potential: PotentialSpec,
    params: PhysicalParams = PhysicalParams(),
    channel: AngularChannel = AngularChannel(-1),
    basis: RadialBasis | None = None,
    x0=None,
    gtol: float = 1e-8,
    max_iter: int = 5000,
) -> MinLambdaTResult:
    """Minimise lambda_T over spline coefficient vectors (BFGS).

    Works in coordinates preconditioned by the Cholesky factor of the SPD form
    K(c^2) + c^2 M.  When the infimum is the continuum edge c^2 that edge is
    returned with ``interior=False``.
    """
    if basis is None:
        raise ValueError("a basis is required")
    prob = GapProblem(basis, potential, params, channel)
    c2 = params.c**2
    P, D, V, wr2 = prob.P, prob.D, prob.V, prob.wr2
    ref_den = 2 * c2 - np.minimum(V, 0.0) + max(potential.K2, 0.0)
    S = D.T @ ((wr2 * c2 / ref_den)[:, None] * D) + c2 * (P.T @ (wr2[:, None] * P))
    L = linalg.cholesky(S, lower=True)
    shift = float(np.max(V)) - c2

    def coef(y):
        return linalg.solve_triangular(L, y, lower=True, trans="T")

    def fun(y):
        x = coef(y)
        u, f = D @ x, P @ x
        a = float(np.sum(wr2 * f**2))
        kin = wr2 * c2 * u**2
        pot = float(np.sum(wr2 * (c2 + V) * f**2))
        lam, _, _ = _lambda_T_root(a, kin, pot, V, shift, c2)
        den = c2 - V + lam
        gx = 2 * (D.T @ (wr2 * c2 * u / den) + P.T @ (wr2 * (V + c2 - lam) * f))
        norm = a + np.sum(kin / den**2)
        gx /= norm
        return lam, linalg.solve_triangular(L, gx, lower=True)

    if x0 is None:
        rate = max(potential.nu, 0.5) if potential.nu > 0 else 1.0
        sw = np.sqrt(wr2)
        xs = np.linalg.lstsq(sw[:, None] * P, sw * np.exp(-rate * prob.r), rcond=None)[0]
    else:
        xs = np.asarray(x0, dtype=float) / prob.scale
    y0 = L.T @ xs
    y0 /= np.linalg.norm(y0)
    res = optimize.minimize(fun, y0, jac=True, method="BFGS", options=dict(gtol=gtol, maxiter=max_iter))
    value = float(res.fun)
    interior = value < c2 - EDGE
    if not interior:
        value = c2
    if not res.success:
        logger.warning("min_lambda_T: %s (best value %.12g)", res.message, value)
    x = coef(res.x) * prob.scale
    return MinLambdaTResult(
        value=value,
        coefficients=x,
        iterations=int(res.nit),
        grad_norm=float(np.linalg.norm(res.jac)),
        converged=bool(res.success) or float(np.linalg.norm(res.jac)) < 10 * gtol,
        interior=interior,
    )


def nonrel_sweep(
    c_values,
    potential: PotentialSpec,
    channel: AngularChannel = AngularChannel(-1),
    k: int = 1,
    n: int = 200,
    tol: float = ROOT_TOL,
) -> NonrelSweep:
    """Shifted levels mu(c) = lam_k(c) - c^2 and the fit mu(c) = mu_inf + s / c^2."""
    c_values = [float(c) for c in c_values]
    if any(b <= a for a, b in zip(c_values, c_values[1:])):
        raise ValueError("c values must be increasing")
    if potential.nu >= min(c_values):
        raise ValueError("need nu < c for every c")
    mus = []
    for c in c_values:
        params = PhysicalParams(c)
        gamma = coulomb_gamma(potential.nu, params, channel.kappa)
        # hydrogenic guess for the decay length of level k
        mu_guess = -potential.nu**2 / (2 * (k + channel.orbital_l) ** 2) if potential.nu > 0 else -1e-3
        lam_guess = c**2 + mu_guess
        basis = gap_basis(decay_radius(lam_guess, params), n, gamma)
        res = solve_level(k, basis, potential, params, channel, tol)
        mus.append(res.lam - c**2)
    x = 1.0 / np.asarray(c_values) ** 2
    slope, mu_inf = np.polyfit(x, mus, 1)
    return NonrelSweep(tuple(c_values), tuple(float(m) for m in mus), float(mu_inf), float(slope))
