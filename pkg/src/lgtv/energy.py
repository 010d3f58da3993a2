"""Discrete denoising energies.

The objective is always

    E(u) = mean_px [ regularizer(grad u) + (delta/2)|grad u|^2 ] + fidelity(u - f)

with a grid-averaged mean over pixels.  Three regularizer families:

* isotropic:   psi(|grad u|) with |.| the per-pixel Frobenius norm,
* blend:       eta(x) psi1(|grad u|) + (1 - eta(x)) psi2(|grad u|),
* anisotropic: the smoothed spectral density applied to the per-pixel
  2 x N Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import grid, spectral
from .densities import Density, Linear

__all__ = [
    "Quadratic",
    "PseudoHuberFidelity",
    "PowerFidelity",
    "EnergyModel",
    "NonSmoothModelError",
    "value",
    "gradient",
    "fidelity_value",
    "fidelity_gradient",
]


class NonSmoothModelError(ValueError):
    """Raised when a smooth gradient is requested for the TV density."""


# ---------------------------------------------------------------------------
# fidelity terms (all strictly convex in the residual)

@dataclass(frozen=True)
class Quadratic:
    def value(self, s):
        return 0.5 * s * s

    def deriv_ratio(self, s):
        # d/dr fid(|r|) = deriv_ratio(|r|) * r
        return np.ones_like(s)


@dataclass(frozen=True)
class PseudoHuberFidelity:
    eps: float

    def __post_init__(self):
        if not (np.isfinite(self.eps) and self.eps > 0):
            raise ValueError("fidelity eps must be positive")

    def value(self, s):
        root = np.hypot(self.eps, s)
        return s * s / (root + self.eps)

    def deriv_ratio(self, s):
        return 1.0 / np.hypot(self.eps, s)


@dataclass(frozen=True)
class PowerFidelity:
    p: float

    def __post_init__(self):
        if not (np.isfinite(self.p) and self.p > 1):
            raise ValueError("power fidelity exponent must exceed 1")

    def value(self, s):
        return s**self.p / self.p

    def deriv_ratio(self, s):
        safe = np.where(s > 0, s, 1.0)
        return np.where(s > 0, safe ** (self.p - 2.0), 0.0)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyModel:
    """A fully specified denoising objective."""

    density: Density
    family: str = "isotropic"  # "isotropic" | "anisotropic" | "blend"
    density2: Density | None = None
    blend_mask: np.ndarray | None = None
    lam: float = 1.0
    delta: float = 0.0
    fidelity: object = field(default_factory=Quadratic)
    smoothing_eps: float | None = None

    def __post_init__(self):
        if self.family not in ("isotropic", "anisotropic", "blend"):
            raise ValueError(f"unknown family {self.family!r}")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError("lam must be positive")
        if not (np.isfinite(self.delta) and self.delta >= 0):
            raise ValueError("delta must be nonnegative")
        if self.family == "blend":
            if self.density2 is None or self.blend_mask is None:
                raise ValueError("blend family needs density2 and blend_mask")
            mask = np.asarray(self.blend_mask, dtype=float)
            if mask.ndim == 3 and mask.shape[2] == 1:
                mask = mask[:, :, 0]
            if mask.ndim != 2:
                raise ValueError("blend_mask must be a single-channel field")
            if np.any(mask < 0) or np.any(mask > 1):
                raise ValueError("blend_mask values must lie in [0, 1]")
            object.__setattr__(self, "blend_mask", mask)
        if self.family == "anisotropic":
            eps = self.smoothing_eps
            if eps is None or not (np.isfinite(eps) and eps > 0):
                raise ValueError("anisotropic family needs smoothing_eps > 0")

    def with_delta(self, delta):
        return replace(self, delta=delta)


def _check_pair(u, f):
    u = grid.as_image(u)
    f = grid.as_image(f)
    if u.shape != f.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {f.shape}")
    return u, f


def fidelity_value(model: EnergyModel, u, f) -> float:
    u, f = _check_pair(u, f)
    r = u - f
    s = np.sqrt(np.sum(r * r, axis=-1))
    return model.lam * float(np.mean(model.fidelity.value(s)))


def fidelity_gradient(model: EnergyModel, u, f):
    u, f = _check_pair(u, f)
    r = u - f
    s = np.sqrt(np.sum(r * r, axis=-1))
    return model.lam * model.fidelity.deriv_ratio(s)[:, :, None] * r


def _density_weights(model: EnergyModel):
    if model.family == "blend":
        return [(model.blend_mask, model.density), (1.0 - model.blend_mask, model.density2)]
    return [(1.0, model.density)]


def value(model: EnergyModel, u, f) -> float:
    """Total energy at u for data f."""
    u, f = _check_pair(u, f)
    p = grid.gradient(u)
    if model.family == "anisotropic":
        reg = spectral.f_star_value(model.density, model.smoothing_eps, p)
    else:
        t = np.sqrt(np.sum(p * p, axis=(-2, -1)))
        reg = 0.0
        for w, dens in _density_weights(model):
            reg = reg + w * dens.value(t)
    if model.delta > 0:
        reg = reg + 0.5 * model.delta * np.sum(p * p, axis=(-2, -1))
    return float(np.mean(reg)) + fidelity_value(model, u, f)


def gradient(model: EnergyModel, u, f):
    """Exact gradient of :func:`value` in the grid-averaged inner product.

    For the isotropic/blend families this is -div(g(|grad u|) grad u) plus
    the fidelity derivative, with g(t) = psi'(t)/t continued by psi''(0) at
    the origin; the TV density itself is rejected (not differentiable at 0).
    """
    u, f = _check_pair(u, f)
    p = grid.gradient(u)
    if model.family == "anisotropic":
        q = spectral.f_star_gradient(model.density, model.smoothing_eps, p)
    else:
        for _, dens in _density_weights(model):
            if isinstance(dens, Linear):
                raise NonSmoothModelError(
                    "the TV density is not differentiable; use the primal-dual TV solver"
                )
        t = np.sqrt(np.sum(p * p, axis=(-2, -1)))
        g = 0.0
        for w, dens in _density_weights(model):
            g = g + w * dens.slope_ratio(t)
        q = g[:, :, None, None] * p
    if model.delta > 0:
        q = q + model.delta * p
    return -grid.divergence(q) + fidelity_gradient(model, u, f)
