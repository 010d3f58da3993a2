"""Scalar convex densities of linear growth.

Each density is a convex, nondecreasing function psi: [0, inf) -> [0, inf)
with psi(0) = 0, exposed together with its first two derivatives and its
recession slope lim psi(t)/t.  These are the building blocks for both the
isotropic regularizer psi(|grad u|) and the spectral regularizer
sum_i psi(lambda_i(grad u)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Density",
    "PhiMu",
    "ScaledPhiMu",
    "PseudoHuber",
    "Linear",
    "EllipticityCertificate",
    "verify_mu_ellipticity",
    "default_ellipticity_grid",
]

# Snap width around the parameter values where the generic closed form
# of PhiMu degenerates (division by (mu-1)(mu-2)).
_SNAP = 1e-6


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("density argument must be finite")
    if np.any(t < 0):
        raise ValueError("density argument must be nonnegative")
    return t


class Density:
    """Base class: a convex nondecreasing density on [0, inf)."""

    def value(self, t):
        raise NotImplementedError

    def deriv(self, t):
        raise NotImplementedError

    def deriv2(self, t):
        raise NotImplementedError

    @property
    def recession_slope(self) -> float:
        """lim_{t->inf} value(t)/t; math.inf when the growth is superlinear."""
        raise NotImplementedError

    @property
    def superlinear(self) -> bool:
        return not math.isfinite(self.recession_slope)

    def slope_ratio(self, t):
        """deriv(t)/t, extended continuously at t=0 by deriv2(0).

        The ratio has a removable singularity at the origin because all
        implemented families satisfy deriv(0) = 0.
        """
        t = _check_t(t)
        small = t < 1e-8
        safe = np.where(small, 1.0, t)
        out = np.where(small, self.deriv2(np.zeros_like(t)), self.deriv(t) / safe)
        if np.isscalar(t) or t.ndim == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class PhiMu(Density):
    """The canonical mu-elliptic density.

    Phi_mu(t) = int_0^t int_0^s (1+r)^(-mu) dr ds.  Closed forms:

        mu not in {1, 2}:  t/(mu-1) + ((1+t)^(2-mu) - 1) / ((mu-1)(mu-2))
        mu = 2:            t - log(1+t)
        mu = 1:            (1+t) log(1+t) - t

    Parameters within 1e-6 of 1 or 2 snap to the special cases to avoid
    catastrophic cancellation in the generic formula.
    """

    mu: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise ValueError("mu must be a positive finite real")

    def _branch(self):
        if abs(self.mu - 1.0) < _SNAP:
            return 1
        if abs(self.mu - 2.0) < _SNAP:
            return 2
        return 0

    def value(self, t):
        t = _check_t(t)
        branch = self._branch()
        if branch == 1:
            return (1.0 + t) * np.log1p(t) - t
        if branch == 2:
            return t - np.log1p(t)
        mu = self.mu
        # expm1/log1p keep the small-t regime (value ~ t^2/2) accurate
        return t / (mu - 1.0) + np.expm1((2.0 - mu) * np.log1p(t)) / (
            (mu - 1.0) * (mu - 2.0)
        )

    def deriv(self, t):
        t = _check_t(t)
        if self._branch() == 1:
            return np.log1p(t)
        mu = self.mu
        return -np.expm1((1.0 - mu) * np.log1p(t)) / (mu - 1.0)

    def deriv2(self, t):
        t = _check_t(t)
        return np.power(1.0 + t, -self.mu)

    @property
    def recession_slope(self) -> float:
        if self.mu <= 1.0 or self._branch() == 1:
            return math.inf
        return 1.0 / (self.mu - 1.0)


@dataclass(frozen=True)
class ScaledPhiMu(Density):
    """(mu-1) * Phi_mu: the TV-approximating normalization, slope 1 at infinity."""

    mu: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 1):
            raise ValueError("mu must exceed 1 for the scaled family")
        object.__setattr__(self, "_base", PhiMu(self.mu))

    def value(self, t):
        return (self.mu - 1.0) * self._base.value(t)

    def deriv(self, t):
        return (self.mu - 1.0) * self._base.deriv(t)

    def deriv2(self, t):
        return (self.mu - 1.0) * self._base.deriv2(t)

    @property
    def recession_slope(self) -> float:
        return 1.0


@dataclass(frozen=True)
class PseudoHuber(Density):
    """sqrt(eps^2 + t^2) - eps: the smooth TV approximation, 3-elliptic."""

    eps: float

    def __post_init__(self):
        if not (np.isfinite(self.eps) and self.eps > 0):
            raise ValueError("eps must be a positive finite real")

    def value(self, t):
        t = _check_t(t)
        root = np.hypot(self.eps, t)
        # t^2 / (root + eps) avoids cancellation for t << eps
        return t * t / (root + self.eps)

    def deriv(self, t):
        t = _check_t(t)
        return t / np.hypot(self.eps, t)

    def deriv2(self, t):
        t = _check_t(t)
        return self.eps**2 / np.hypot(self.eps, t) ** 3

    @property
    def recession_slope(self) -> float:
        return 1.0


@dataclass(frozen=True)
class Linear(Density):
    """psi(t) = t: the TV density itself (not smooth at the matrix origin)."""

    def value(self, t):
        return _check_t(t) + 0.0

    def deriv(self, t):
        t = _check_t(t)
        return np.ones_like(t)

    def deriv2(self, t):
        t = _check_t(t)
        return np.zeros_like(t)

    @property
    def recession_slope(self) -> float:
        return 1.0


@dataclass(frozen=True)
class EllipticityCertificate:
    """Measured pinching constants for the degenerate-ellipticity sandwich

        nu4 (1+t)^(-mu) <= min{psi'(t)/t, psi''(t)},
        max{psi'(t)/t, psi''(t)} <= nu5 / (1+t).
    """

    nu4: float
    nu5: float
    ok: bool


def default_ellipticity_grid(n: int = 400):
    return np.geomspace(1e-3, 1e6, n)


def verify_mu_ellipticity(
    density: Density, mu_claimed: float, grid=None
) -> EllipticityCertificate:
    """Measure the tightest ellipticity constants of ``density`` on a grid.

    The certificate is accepted only if the lower envelope actually decays
    no faster than (1+t)^(-mu_claimed): on a finite grid positive constants
    always exist, so the tail slope of log min{psi'/t, psi''} against
    log(1+t) is estimated by least squares and compared with -mu_claimed.
    """
    if grid is None:
        grid = default_ellipticity_grid()
    t = np.asarray(grid, dtype=float)
    if t.size == 0:
        raise ValueError("sample grid must be nonempty")
    if np.any(t <= 0) or np.any(t > 1e6):
        raise ValueError("sample grid must lie in (0, 1e6]")

    ratio = density.slope_ratio(t)
    second = density.deriv2(t)
    lo = np.minimum(ratio, second)
    hi = np.maximum(ratio, second)

    with np.errstate(divide="ignore"):
        nu4 = float(np.min(lo * (1.0 + t) ** mu_claimed))
        nu5 = float(np.max(hi * (1.0 + t)))

    ok = np.isfinite(nu4) and nu4 > 0 and np.isfinite(nu5) and nu5 > 0
    if ok and np.all(lo > 0):
        # tail slope check over the top two decades of the grid
        x = np.log1p(t)
        tail = x >= x.max() - np.log(100.0)
        if tail.sum() >= 2:
            xs, ys = x[tail], np.log(lo[tail])
            slope = np.polyfit(xs, ys, 1)[0]
            if slope < -mu_claimed - 0.05:
                ok = False
    elif np.any(lo <= 0):
        ok = False
    return EllipticityCertificate(nu4=nu4, nu5=nu5, ok=bool(ok))
