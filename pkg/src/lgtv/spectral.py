"""Spectral (singular-value) energy densities for 2 x N per-pixel Jacobians.

The direction-aware regularizer applies a scalar density to each singular
value of the per-pixel Jacobian: F(p) = sum_i psi(lambda_i(p)).  Its smooth
surrogate replaces lambda_i by (eps^2 + lambda_i^4)^(1/4), which is convex
and twice differentiable in p while keeping the same linear growth and the
nuclear norm as recession function.

All functions accept batched input: p may have shape (..., 2, N), and
values/gradients broadcast over the leading axes.
"""

from __future__ import annotations

import numpy as np

from .densities import Density

__all__ = [
    "singular_values",
    "svd2n",
    "nuclear_norm",
    "frobenius_norm",
    "f_psi_value",
    "f_star_value",
    "f_star_gradient",
    "recession_value",
    "project_spectral_ball",
]


def _check_mat(p):
    p = np.asarray(p, dtype=float)
    if p.ndim < 2 or p.shape[-2] != 2:
        raise ValueError(f"expected shape (..., 2, N), got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("matrix entries must be finite")
    return p


def svd2n(p):
    """Thin SVD of a batch of 2 x N matrices.

    Returns (U, s, Vt) with U (..., 2, k), s (..., k) descending, Vt (..., k, N),
    k = min(2, N).  Single-channel matrices conceptually carry a second,
    zero singular value (zero-column embedding); it is simply absent here.
    """
    p = _check_mat(p)
    return np.linalg.svd(p, full_matrices=False)


def singular_values(p):
    """Singular values of p, always length 2 (padded with 0 for N=1), descending.

    Their squares are the eigenvalues of p p^T.
    """
    p = _check_mat(p)
    s = np.linalg.svd(p, compute_uv=False)
    if s.shape[-1] < 2:
        pad = [(0, 0)] * (s.ndim - 1) + [(0, 2 - s.shape[-1])]
        s = np.pad(s, pad)
    return s


def nuclear_norm(p):
    return np.sum(singular_values(p), axis=-1)


def frobenius_norm(p):
    p = _check_mat(p)
    return np.sqrt(np.sum(p * p, axis=(-2, -1)))


def f_psi_value(density: Density, p):
    """sum_i psi(lambda_i(p)); with psi(t)=t this is the nuclear norm."""
    s = singular_values(p)
    return np.sum(density.value(s), axis=-1)


def _smooth_sv(eps, lam):
    # (eps^2 + lambda^4)^(1/4); lambda^4 = sigma^2 with sigma the
    # eigenvalues of p p^T
    return (eps**2 + lam**4) ** 0.25


def f_star_value(density: Density, eps: float, p):
    """Smoothed spectral density: sum_i psi((eps^2 + lambda_i^4)^(1/4))."""
    if not (np.isfinite(eps) and eps > 0):
        raise ValueError("smoothing eps must be positive")
    # thin (unpadded) singular values: a single-channel image then pays no
    # constant psi(sqrt(eps)) floor and matches the isotropic energy with
    # the smoothed scalar density
    p = _check_mat(p)
    s = np.linalg.svd(p, compute_uv=False)
    return np.sum(density.value(_smooth_sv(eps, s)), axis=-1)


def f_star_gradient(density: Density, eps: float, p):
    """Gradient of :func:`f_star_value` with respect to p.

    With the thin SVD p = U diag(lambda) V^T and h(l) = psi((eps^2+l^4)^(1/4)),
    the gradient of the spectral function is U diag(h'(lambda)) V^T with

        h'(l) = psi'((eps^2+l^4)^(1/4)) * l^3 * (eps^2+l^4)^(-3/4).

    h'(0) = 0, so the formula is well defined at rank-deficient p.
    """
    if not (np.isfinite(eps) and eps > 0):
        raise ValueError("smoothing eps must be positive")
    u, s, vt = svd2n(p)
    smoothed = _smooth_sv(eps, s)
    hprime = density.deriv(smoothed) * s**3 * (eps**2 + s**4) ** (-0.75)
    return np.einsum("...ik,...k,...kj->...ij", u, hprime, vt)


def recession_value(density: Density, p):
    """Asymptotic price of large Jacobians: slope * nuclear norm."""
    slope = density.recession_slope
    if not np.isfinite(slope):
        raise ValueError("density has superlinear growth; no recession function")
    return slope * nuclear_norm(p)


def project_spectral_ball(p, radius: float = 1.0):
    """Project each matrix onto {q : largest singular value <= radius}.

    This is the polar-ball projection for the nuclear norm: singular values
    are clamped at ``radius``.
    """
    u, s, vt = svd2n(p)
    s = np.minimum(s, radius)
    return np.einsum("...ik,...k,...kj->...ij", u, s, vt)
