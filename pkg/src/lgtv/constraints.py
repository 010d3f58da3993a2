"""Closed convex sets in channel space and the nearest-point projection.

The denoising energies are minimized without constraints; these sets exist
to verify that the minimizer nevertheless stays inside the convex hull of
the data values (the maximum principle of the model), and optionally to
sanitize input data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grid

__all__ = ["Box", "Ball", "PsdCone", "check_nonexpansive", "hull_violation"]


def _check_vec(y, n):
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("input must be finite")
    if y.shape[-1] != n:
        raise ValueError(f"expected vectors of length {n}, got {y.shape[-1]}")
    return y


@dataclass(frozen=True)
class Box:
    """Axis-aligned box {lo <= y <= hi} (componentwise)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("box needs lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.shape[0]

    def project(self, y):
        y = _check_vec(y, self.dim)
        return np.clip(y, self.lo, self.hi)


@dataclass(frozen=True)
class Ball:
    """Euclidean ball of given center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", center)

    @property
    def dim(self):
        return self.center.shape[0]

    def project(self, y):
        y = _check_vec(y, self.dim)
        d = y - self.center
        dist = np.sqrt(np.sum(d * d, axis=-1, keepdims=True))
        scale = np.where(dist > self.radius, self.radius / np.maximum(dist, 1e-300), 1.0)
        return self.center + scale * d


@dataclass(frozen=True)
class PsdCone:
    """Symmetric m x m matrices with eigenvalues >= alpha, vectorized (N = m^2).

    Projection symmetrizes, eigendecomposes and clamps eigenvalues below
    at alpha.
    """

    m: int
    alpha: float = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("matrix size must be positive")
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError("alpha must be nonnegative")

    @property
    def dim(self):
        return self.m * self.m

    def project(self, y):
        y = _check_vec(y, self.dim)
        shape = y.shape[:-1]
        a = y.reshape(shape + (self.m, self.m))
        a = 0.5 * (a + np.swapaxes(a, -1, -2))
        w, v = np.linalg.eigh(a)
        w = np.maximum(w, self.alpha)
        out = np.einsum("...ik,...k,...jk->...ij", v, w, v)
        return out.reshape(shape + (self.dim,))


def check_nonexpansive(convex_set, trials=10000, scale=10.0, seed=0, tol=1e-12):
    """Sample point pairs and check |pi(y) - pi(y')| <= |y - y'| + tol."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = convex_set.dim
    y = rng.uniform(-scale, scale, size=(trials, n))
    yp = rng.uniform(-scale, scale, size=(trials, n))
    d_in = np.linalg.norm(y - yp, axis=-1)
    d_out = np.linalg.norm(convex_set.project(y) - convex_set.project(yp), axis=-1)
    return bool(np.all(d_out <= d_in + tol))


def hull_violation(convex_set, u) -> float:
    """Max over pixels of the distance from u(x) to the set."""
    u = grid.as_image(u)
    if u.shape[2] != convex_set.dim:
        raise ValueError(
            f"image has {u.shape[2]} channels but the set lives in R^{convex_set.dim}"
        )
    flat = u.reshape(-1, u.shape[2])
    proj = convex_set.project(flat)
    return float(np.max(np.linalg.norm(flat - proj, axis=-1), initial=0.0))
