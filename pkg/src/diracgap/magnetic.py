"""Lowest relativistic Landau level of the magnetic Coulomb-Dirac operator (c = 1).

    a_B(z)     = B int_0^inf s exp(-B s^2/2) / sqrt(s^2 + z^2) ds
    lambda_B(f): lambda int |f|^2 = int |f'|^2/(1 + lambda + nu a_B) + (1 - nu a_B)|f|^2
    c0(nu, B)  = inf_f lambda_B(f)

The critical field is the B at which c0 reaches the lower continuum -1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg, optimize, special

from .core import DiracGapError, RadialBasis, graded_breakpoints
from .gapsolver import _lambda_T_root

logger = logging.getLogger(__name__)

B_MAX = 1e12


class OutOfRangeError(DiracGapError):
    """c0 does not reach -1 for any B up to the search limit."""


@dataclass(frozen=True)
class MagneticParams:
    nu: float
    B: float

    def __post_init__(self):
        if not 0 < self.nu < 1:
            raise ValueError("nu must lie in (0, 1)")
        if not self.B > 0:
            raise ValueError("B must be positive")


def a_B0(z, B: float, method: str = "closed"):
    """Kernel a_B(z); ``method='quad'`` integrates the defining formula adaptively.

    The substitution w = sqrt(s^2 + z^2) gives sqrt(pi B / 2) erfcx(|z| sqrt(B/2)).
    """
    if not B > 0:
        raise ValueError("B must be positive")
    z = np.asarray(z, dtype=float)
    if method == "closed":
        out = np.sqrt(np.pi * B / 2) * special.erfcx(np.abs(z) * np.sqrt(B / 2))
    elif method == "quad":

        def one(zz):
            def f(s):
                return B * s * np.exp(-B * s * s / 2) / np.hypot(s, zz)

            split = max(abs(zz), 1 / np.sqrt(B))
            head = integrate.quad(f, 0.0, split, epsabs=0.0, epsrel=1e-12, limit=400)[0]
            return head + integrate.quad(f, split, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)[0]

        out = np.vectorize(one)(z)
    else:
        raise ValueError("method must be 'closed' or 'quad'")
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class ZBasis:
    """Quadratic (or higher) B-splines on [-Z, Z], zero at both ends, with a
    breakpoint at z = 0 and grading towards it on the scale 1/sqrt(B)."""

    inner: RadialBasis
    half_width: float

    @classmethod
    def build(cls, B: float, n_half: int = 100, z_max: float | None = None, degree: int = 2) -> "ZBasis":
        if z_max is None:
            z_max = 40.0 / np.sqrt(min(B, 1.0))
        r0 = 0.02 / np.sqrt(B)
        half = graded_breakpoints(z_max, n_half, r0=r0, scale=z_max / 4)
        bp = np.concatenate([-half[::-1], half[1:]]) + z_max
        return cls(RadialBasis(bp, degree), float(z_max))

    @property
    def size(self) -> int:
        return self.inner.size

    @property
    def z_max(self) -> float:
        return self.half_width

    @property
    def quadrature(self):
        r, w = self.inner.quadrature
        return r - self.half_width, w

    @property
    def collocation(self):
        return self.inner.collocation

    def evaluate(self, z, deriv=0):
        return self.inner.evaluate(np.asarray(z, dtype=float) + self.half_width, deriv)

    def contains(self, other: "ZBasis") -> bool:
        return self.half_width == other.half_width and self.inner.contains(other.inner)


@dataclass(frozen=True, eq=False)
class Landau1DResult:
    nu: float
    B: float
    value: float
    z: np.ndarray = field(repr=False)
    f: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    history: tuple = field(repr=False)
    grad_norm: float = float("nan")
    converged: bool = True
    tail_mass: float = float("nan")
    in_gap: bool = True


def _profile_terms(f, df, w, A, nu):
    a = float(np.sum(w * f * f))
    kin = w * df * df
    pot = float(np.sum(w * (1 - nu * A) * f * f))
    return a, kin, pot


def lambda_B0(f, df, z, w, nu: float, B: float, tol: float = 1e-12) -> float:
    """lambda_B(f) for samples f, f' on a 1D quadrature rule (z, w)."""
    f, df = np.asarray(f, float), np.asarray(df, float)
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    A = a_B0(z, B)
    a, kin, pot = _profile_terms(f, df, w, A, nu)
    if not a > 0:
        raise ValueError("lambda_B of the zero function is undefined")
    if nu == 0:
        return float(np.sqrt(1 + np.sum(kin) / a))
    # same scalar equation as lambda^T with c = 1 and V = -nu a_B
    lam, _, _ = _lambda_T_root(a, kin, pot, -nu * A, -1.0 - nu * float(np.min(A)), 1.0, tol)
    return float(lam)


def gaussian_trial(width: float = 1.0):
    """(f, f') callables of exp(-z^2 / (2 width^2))."""
    f = lambda z: np.exp(-np.asarray(z) ** 2 / (2 * width**2))
    df = lambda z: -np.asarray(z) / width**2 * f(z)
    return f, df


class _Problem:
    def __init__(self, nu, B, basis: ZBasis):
        self.nu, self.B, self.basis = nu, B, basis
        self.z, self.w = basis.quadrature
        self.P, self.D = basis.collocation
        self.A = a_B0(self.z, B)
        # lambda-independent SPD reference form K(lambda = 1) + M for preconditioning
        S = self.D.T @ ((self.w / 2)[:, None] * self.D) + self.P.T @ (self.w[:, None] * self.P)
        self.L = linalg.cholesky(S, lower=True)

    def matrix(self, lam):
        den = 1 + lam + self.nu * self.A
        K = self.D.T @ ((self.w / den)[:, None] * self.D)
        M = self.P.T @ ((self.w * (1 - self.nu * self.A - lam))[:, None] * self.P)
        return K + M

    def lowest(self, lam):
        return float(linalg.eigh(self.matrix(lam), eigvals_only=True, subset_by_index=[0, 0])[0])


def _c0_nu_unchecked(nu: float, B: float, basis: ZBasis, gtol=1e-8, max_iter=5000) -> Landau1DResult:
    prob = _Problem(nu, B, basis)
    P, D, w, A, L = prob.P, prob.D, prob.w, prob.A, prob.L
    lower = -1.0 - nu * float(np.min(A))
    history = []

    def coef(y):
        return linalg.solve_triangular(L, y, lower=True, trans="T")

    def fun(y):
        x = coef(y)
        f, df = P @ x, D @ x
        a, kin, pot = _profile_terms(f, df, w, A, nu)
        lam, _, _ = _lambda_T_root(a, kin, pot, -nu * A, lower, 1.0, 1e-12)
        den = 1 + lam + nu * A
        gx = 2 * (D.T @ (w * df / den) + P.T @ (w * (1 - nu * A - lam) * f))
        gx /= a + np.sum(kin / den**2)
        history.append(lam)
        # gradient of the scale-invariant functional, rescaled to unit |y|
        return lam, linalg.solve_triangular(L, gx, lower=True)

    f0 = np.exp(-(prob.z**2) / 2)
    sw = np.sqrt(w)
    x0 = np.linalg.lstsq(sw[:, None] * P, sw * f0, rcond=None)[0]
    y0 = L.T @ x0
    y0 /= np.linalg.norm(y0)
    res = optimize.minimize(fun, y0, jac=True, method="BFGS", options=dict(gtol=gtol, maxiter=max_iter))
    y = res.x / np.linalg.norm(res.x)
    value, grad = fun(y)
    x = coef(y)
    f = P @ x
    tail = float(np.sum(w * f * f * (np.abs(prob.z) > 0.8 * basis.z_max)) / np.sum(w * f * f))
    gnorm = float(np.linalg.norm(grad))
    # a trial at or below -1 certifies that the level has left the gap; the
    # minimiser then sits on the truncation edge, where no gradient test applies
    in_gap = value > -1.0
    converged = bool(res.success) or gnorm <= 1e-7 * max(abs(value), 1e-300) or not in_gap
    if not converged:
        logger.warning("c0: %s (best value %.12g)", res.message, value)
    return Landau1DResult(
        nu=nu, B=B, value=float(value), z=prob.z, f=f, coefficients=x, history=tuple(history),
        grad_norm=gnorm, converged=converged, tail_mass=tail, in_gap=in_gap,
    )


def c0(params: MagneticParams, basis: ZBasis | None = None, **kw) -> Landau1DResult:
    """c0(nu, B) = inf lambda_B(f) by quasi-Newton minimisation over spline coefficients."""
    if basis is None:
        basis = ZBasis.build(params.B)
    return _c0_nu_unchecked(params.nu, params.B, basis, **kw)


def c0_matrix(nu: float, B: float, basis: ZBasis | None = None, tol: float = 1e-13) -> float:
    """c0 as the zero of the lowest eigenvalue of the 1D matrix A(lambda) (second route)."""
    if basis is None:
        basis = ZBasis.build(B)
    prob = _Problem(nu, B, basis)
    lo = -1.0 - nu * float(np.min(prob.A)) + 1e-12
    hi = 1.0
    if prob.lowest(hi) > 0:
        return 1.0
    if prob.lowest(lo) <= 0:
        # the level has dropped to the smallest admissible lambda on this domain
        logger.warning("c0(%g, %g) at the admissible edge %.12g", nu, B, lo)
        return float(lo)
    return float(optimize.brentq(prob.lowest, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))


def below_continuum(nu: float, B: float, basis: ZBasis | None = None) -> bool:
    """True when c0(nu, B) <= -1, i.e. K/(nu a) + (2 - nu a) M has a nonpositive eigenvalue."""
    if basis is None:
        basis = ZBasis.build(B)
    return _Problem(nu, B, basis).lowest(-1.0) <= 0


@dataclass(frozen=True)
class CriticalField:
    nu: float
    B_lower: float
    B_upper: float

    @property
    def value(self) -> float:
        """Headline estimate: the upper member of the bracket."""
        return self.B_upper


def _critical_B(nu, n_half=100, rel_tol=1e-6, b_max=B_MAX):
    lo, hi = np.log(1e-6), np.log(b_max)
    if not below_continuum(nu, b_max, ZBasis.build(b_max, n_half)):
        raise OutOfRangeError(f"c0({nu:g}, B) stays above -1 for B <= {b_max:g}")
    if below_continuum(nu, np.exp(lo), ZBasis.build(np.exp(lo), n_half)):
        return float(np.exp(lo))
    while hi - lo > rel_tol:
        mid = 0.5 * (lo + hi)
        B = float(np.exp(mid))
        if below_continuum(nu, B, ZBasis.build(B, n_half)):
            hi = mid
        else:
            lo = mid
    return float(np.exp(0.5 * (lo + hi)))


def critical_field(nu: float, n_half: int = 100) -> CriticalField:
    """Bracket [B from c0 at nu + nu^(3/2), B from c0 at nu] for the critical field."""
    if not 0 < nu < 1:
        raise ValueError("nu must lie in (0, 1)")
    upper = _critical_B(nu, n_half)
    lower = _critical_B(nu + nu**1.5, n_half)
    return CriticalField(nu, lower, upper)


def critical_field_bounds(nu: float):
    """Known analytic bounds 0.75/nu^2 <= B(nu) <= 18 pi nu^2 / [3 nu^2 - 2]_+^2."""
    pos = max(3 * nu * nu - 2, 0.0)
    upper = 18 * np.pi * nu * nu / pos**2 if pos > 0 else float("inf")
    return 0.75 / nu**2, upper
