"""Discrete image calculus on a regular pixel grid.

Images are numpy arrays of shape (H, W, N) with N channels; per-pixel
Jacobians are arrays of shape (H, W, 2, N), the first Jacobian row holding
x-differences (along columns) and the second y-differences (along rows).
The gradient uses forward differences with replicate (Neumann) boundary and
unit spacing; the divergence is its exact negative adjoint.

All inner products and norms are grid-averaged (divided by the number of
pixels) so that tolerances are resolution independent.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_image",
    "as_jacobian",
    "gradient",
    "divergence",
    "inner",
    "grad_inner",
    "norm",
    "lp_distance",
    "gradient_norm_bound",
]


def as_image(u, channels=None):
    """Validate and return an (H, W, N) float image array.

    2-D input is promoted to a single channel.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim == 2:
        u = u[:, :, None]
    if u.ndim != 3:
        raise ValueError(f"image must have shape (H, W, N), got {u.shape}")
    if u.shape[0] < 1 or u.shape[1] < 1 or u.shape[2] < 1:
        raise ValueError(f"image dimensions must be positive, got {u.shape}")
    if channels is not None and u.shape[2] != channels:
        raise ValueError(f"expected {channels} channels, got {u.shape[2]}")
    if not np.all(np.isfinite(u)):
        raise ValueError("image entries must be finite")
    return u


def as_jacobian(p):
    p = np.asarray(p, dtype=float)
    if p.ndim != 4 or p.shape[2] != 2:
        raise ValueError(f"jacobian must have shape (H, W, 2, N), got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("jacobian entries must be finite")
    return p


def gradient(u):
    """Forward-difference Jacobian field, shape (H, W, 2, N)."""
    u = as_image(u)
    h, w, n = u.shape
    p = np.zeros((h, w, 2, n))
    p[:, :-1, 0, :] = u[:, 1:, :] - u[:, :-1, :]
    p[:-1, :, 1, :] = u[1:, :, :] - u[:-1, :, :]
    return p


def divergence(p):
    """Exact negative adjoint of :func:`gradient`."""
    p = as_jacobian(p)
    h, w, _, n = p.shape
    out = np.zeros((h, w, n))
    px = p[:, :, 0, :]
    py = p[:, :, 1, :]
    if w > 1:
        out[:, 0, :] += px[:, 0, :]
        out[:, 1:-1, :] += px[:, 1:-1, :] - px[:, :-2, :]
        out[:, -1, :] += -px[:, -2, :]
    if h > 1:
        out[0, :, :] += py[0, :, :]
        out[1:-1, :, :] += py[1:-1, :, :] - py[:-2, :, :]
        out[-1, :, :] += -py[-2, :, :]
    return out


def _npixels(a):
    return a.shape[0] * a.shape[1]


def inner(a, b):
    """Grid-averaged inner product of two image arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b)) / _npixels(a)


def grad_inner(p, q):
    """Grid-averaged inner product of two Jacobian fields."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")
    return float(np.sum(p * q)) / _npixels(p)


def norm(a):
    return float(np.sqrt(np.sum(np.square(a)) / _npixels(np.asarray(a))))


def lp_distance(a, b, p=2.0):
    """Grid-averaged discrete L^p distance: (mean |a-b|^p)^(1/p)."""
    a = as_image(a)
    b = as_image(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if p < 1:
        raise ValueError("p must be >= 1")
    diff = np.abs(a - b)
    return float((np.sum(diff**p) / _npixels(a)) ** (1.0 / p))


def gradient_norm_bound(height, width, channels=1, iters=200, tol=1e-8, seed=0):
    """Estimate ||gradient||^2 by power iteration on -div(grad(.)).

    The standard bound for this stencil is 8; the estimate is used to set
    primal-dual step sizes.
    """
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((height, width, channels))
    u /= np.linalg.norm(u)
    lam = 0.0
    for _ in range(iters):
        v = -divergence(gradient(u))
        new_lam = float(np.sum(u * v))
        nv = np.linalg.norm(v)
        if nv == 0:
            return 0.0
        u = v / nv
        if abs(new_lam - lam) <= tol * max(1.0, abs(new_lam)):
            lam = new_lam
            break
        lam = new_lam
    return lam
