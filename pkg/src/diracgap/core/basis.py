"""B-spline radial bases, Gauss rules and radial profiles.

All radial inner products use the measure r^2 dr.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import optimize
from scipy.interpolate import BSpline
from scipy.special import roots_legendre

from .params import AngularChannel, SingularEvaluationError


def gauss_legendre(edges, npts: int):
    """Composite Gauss-Legendre nodes/weights over consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = roots_legendre(npts)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (b - a) * x[None, :] + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def graded_breakpoints(r_max: float, n_intervals: int, r0: float = 1e-6, scale: float | None = None):
    """Breakpoints uniform in t(r) = log(1 + r/r0) + r/scale.

    Spacing is ~r0*dt near the origin, geometric for r0 << r << scale and
    ~scale*dt far out.  Doubling ``n_intervals`` gives a nested refinement.
    """
    if scale is None:
        scale = r_max / 20.0
    t_of_r = lambda r: np.log1p(r / r0) + r / scale
    T = t_of_r(r_max)
    targets = np.linspace(0.0, T, n_intervals + 1)
    r = np.empty_like(targets)
    r[0], r[-1] = 0.0, r_max
    for i, t in enumerate(targets[1:-1], start=1):
        r[i] = optimize.brentq(lambda x: t_of_r(x) - t, 0.0, r_max, xtol=1e-300, rtol=1e-15)
    return r


@dataclass(frozen=True, eq=False)
class RadialBasis:
    """Clamped B-splines on ``breakpoints`` with the two boundary splines removed.

    Every basis function vanishes at r = 0 and r = r_max; the basis size is
    ``len(breakpoints) - 1 + degree - 2``.
    """

    breakpoints: np.ndarray
    degree: int = 2
    qpoints: int | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2 or bp[0] != 0.0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must start at 0 and be strictly increasing")
        if not 2 <= self.degree <= 6:
            raise ValueError("spline degree must be in [2, 6]")
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        if self.qpoints is None:
            object.__setattr__(self, "qpoints", 2 * self.degree + 2)
        if self.size < 1:
            raise ValueError("basis is empty")

    @classmethod
    def graded(cls, r_max: float, n: int, degree: int = 2, r0: float = 1e-6, scale: float | None = None):
        """Basis of size ``n`` on a graded grid (see :func:`graded_breakpoints`)."""
        n_intervals = n - degree + 2
        bp = graded_breakpoints(r_max, n_intervals, r0=r0, scale=scale)
        return cls(bp, degree, meta=dict(r_max=r_max, r0=r0, scale=scale))

    @property
    def r_max(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def size(self) -> int:
        return len(self.breakpoints) - 1 + self.degree - 2

    @cached_property
    def knots(self) -> np.ndarray:
        d, bp = self.degree, self.breakpoints
        return np.concatenate([np.full(d, bp[0]), bp, np.full(d, bp[-1])])

    @cached_property
    def _splines(self):
        full = len(self.knots) - self.degree - 1
        coef = np.eye(full)[:, 1:-1]
        spl = BSpline(self.knots, coef, self.degree, extrapolate=False)
        return spl, spl.derivative()

    def evaluate(self, r, deriv: int = 0) -> np.ndarray:
        """Matrix of shape (len(r), n) with basis values (or first derivatives)."""
        spl = self._splines[deriv]
        out = spl(np.atleast_1d(np.asarray(r, dtype=float)))
        return np.nan_to_num(out, nan=0.0)

    @cached_property
    def quadrature(self):
        """Gauss-Legendre nodes/weights with ``qpoints`` points per knot interval."""
        return gauss_legendre(self.breakpoints, self.qpoints)

    @cached_property
    def collocation(self):
        """(values, derivatives) of the basis at the quadrature nodes."""
        r, _ = self.quadrature
        return self.evaluate(r), self.evaluate(r, 1)

    def contains(self, other: "RadialBasis") -> bool:
        """True if the span of ``other`` is a subspace of this basis' span."""
        if other.degree != self.degree or other.r_max != self.r_max:
            return False
        return bool(np.all(np.isin(other.breakpoints, self.breakpoints)))

    def profile(self, coef, channel: AngularChannel = AngularChannel(-1), r_nodes=None) -> "RadialProfile":
        """Spline function with coefficients ``coef`` as a profile on the Gauss rule."""
        coef = np.asarray(coef, dtype=float)
        if r_nodes is None:
            r, w = self.quadrature
            vals, ders = self.collocation
        else:
            r, w = r_nodes
            vals, ders = self.evaluate(r), self.evaluate(r, 1)
        return RadialProfile(r, w, vals @ coef, ders @ coef, channel)


def graded_rule(r_max: float, r_min: float = 1e-14, split: float = 1.0, width: float = 0.25, npts: int = 16):
    """Composite Gauss rule for profiles with an integrable singularity at 0.

    Geometric panels (ratio 2) from ``r_min`` up to ``split`` followed by
    uniform panels of at most ``width`` up to ``r_max``.
    """
    split = min(split, r_max)
    k = int(np.ceil(np.log2(split / r_min)))
    edges = list(split * 2.0 ** -np.arange(k, 0, -1)) + [split]
    if r_max > split:
        m = int(np.ceil((r_max - split) / width))
        edges += list(np.linspace(split, r_max, m + 1)[1:])
    return gauss_legendre(np.array(edges), npts)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Upper-component radial profile f(r) of a 2-spinor f(r) Omega_kappa.

    Values and derivatives are stored on a quadrature rule (nodes, weights);
    integrals are sums over that rule with measure r^2 dr.
    """

    r: np.ndarray
    w: np.ndarray
    f: np.ndarray
    df: np.ndarray
    channel: AngularChannel = AngularChannel(-1)

    @classmethod
    def from_callable(cls, f, df, rule, channel: AngularChannel = AngularChannel(-1)):
        r, w = rule
        return cls(r, w, np.asarray(f(r), float), np.asarray(df(r), float), channel)

    def scaled(self, t: float) -> "RadialProfile":
        return RadialProfile(self.r, self.w, t * self.f, t * self.df, self.channel)

    @property
    def sigma_grad(self) -> np.ndarray:
        return radial_sigma_grad(self.channel, self.f, self.df, self.r)

    def norm2(self) -> float:
        return float(np.sum(self.w * self.r**2 * self.f**2))

    def integrate(self, density) -> float:
        """Integral of ``density`` (sampled at the nodes) against r^2 dr."""
        return float(np.sum(self.w * self.r**2 * density))


def radial_sigma_grad(channel: AngularChannel, f, df, r):
    """Radial part of (sigma . grad)(f Omega_kappa): f' + (1 + kappa) f / r."""
    kappa = channel.kappa if isinstance(channel, AngularChannel) else int(channel)
    r = np.asarray(r, dtype=float)
    f = np.asarray(f, dtype=float)
    df = np.asarray(df, dtype=float)
    if kappa == -1:
        return df + 0.0 * r
    if np.any(r == 0):
        raise SingularEvaluationError(f"(1 + kappa) f / r evaluated at r = 0 for kappa = {kappa}")
    return df + (1 + kappa) * f / r
