"""Scikit-learn style denoising transformers.

Both estimators treat a single (H, W, N) or (H, W) array as one sample and
denoise it in ``transform``; they are stateless (``fit`` only validates),
so they compose with pipelines and ``clone`` like any other transformer.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import energy, grid, solve, tv
from .densities import PhiMu, PseudoHuber, ScaledPhiMu

__all__ = ["VariationalDenoiser", "TVDenoiser", "make_density"]


def make_density(name, mu=2.0, eps=0.1):
    """Density factory used by the estimators and the CLI."""
    if name == "phimu":
        return PhiMu(mu=mu)
    if name == "scaled_phimu":
        return ScaledPhiMu(mu=mu)
    if name == "phuber":
        return PseudoHuber(eps=eps)
    raise ValueError(f"unknown density {name!r}")


def _fidelity(spec):
    if spec == "quad":
        return energy.Quadratic()
    if spec.startswith("phuber:"):
        return energy.PseudoHuberFidelity(eps=float(spec.split(":", 1)[1]))
    if spec.startswith("power:"):
        return energy.PowerFidelity(p=float(spec.split(":", 1)[1]))
    raise ValueError(f"unknown fidelity {spec!r}")


class VariationalDenoiser(BaseEstimator, TransformerMixin):
    """Denoise with a smooth linear-growth regularizer.

    Parameters mirror the energy model: ``family`` picks the channel
    coupling ("iso", "aniso" or "blend"), ``density`` the scalar density
    ("phimu", "scaled_phimu" or "phuber") with its parameter ``mu`` or
    ``eps``, ``lam`` the fidelity weight.  ``blend_mask`` and ``mu2`` only
    apply to the blend family; ``smoothing_eps`` only to "aniso".
    """

    def __init__(
        self,
        family="iso",
        density="phimu",
        mu=2.0,
        eps=0.1,
        mu2=50.0,
        blend_mask=None,
        smoothing_eps=1e-3,
        lam=1.0,
        delta=0.0,
        fidelity="quad",
        grad_tol=1e-8,
        max_iters=20000,
        delta_schedule=(),
    ):
        self.family = family
        self.density = density
        self.mu = mu
        self.eps = eps
        self.mu2 = mu2
        self.blend_mask = blend_mask
        self.smoothing_eps = smoothing_eps
        self.lam = lam
        self.delta = delta
        self.fidelity = fidelity
        self.grad_tol = grad_tol
        self.max_iters = max_iters
        self.delta_schedule = delta_schedule

    def _model(self):
        dens = make_density(self.density, mu=self.mu, eps=self.eps)
        if self.family == "iso":
            return energy.EnergyModel(
                density=dens, lam=self.lam, delta=self.delta,
                fidelity=_fidelity(self.fidelity),
            )
        if self.family == "aniso":
            return energy.EnergyModel(
                density=dens, family="anisotropic", lam=self.lam,
                delta=self.delta, fidelity=_fidelity(self.fidelity),
                smoothing_eps=self.smoothing_eps,
            )
        if self.family == "blend":
            return energy.EnergyModel(
                density=dens, family="blend",
                density2=make_density(self.density, mu=self.mu2, eps=self.eps),
                blend_mask=self.blend_mask, lam=self.lam, delta=self.delta,
                fidelity=_fidelity(self.fidelity),
            )
        raise ValueError(f"unknown family {self.family!r}")

    def fit(self, X, y=None):
        grid.as_image(X)
        self._model()  # validate parameters early
        self.n_features_in_ = np.asarray(X).shape[-1]
        return self

    def transform(self, X):
        f = grid.as_image(X)
        config = solve.SolverConfig(
            grad_tol=self.grad_tol,
            max_iters=self.max_iters,
            delta_schedule=tuple(self.delta_schedule),
        )
        u, report = solve.minimize(self._model(), f, config)
        self.report_ = report
        return u if np.asarray(X).ndim == 3 else u[:, :, 0]


class TVDenoiser(BaseEstimator, TransformerMixin):
    """Denoise with exact (non-smooth) total variation via primal-dual iteration.

    ``variant`` selects the channel coupling of the per-pixel Jacobian
    norm: "frobenius" (scalar coupling) or "nuclear" (spectral coupling).
    """

    def __init__(self, variant="frobenius", lam=1.0, gap_tol=1e-6, max_iters=100000):
        self.variant = variant
        self.lam = lam
        self.gap_tol = gap_tol
        self.max_iters = max_iters

    def _problem(self):
        return tv.TvProblem(
            variant=self.variant, lam=self.lam,
            gap_tol=self.gap_tol, max_iters=self.max_iters,
        )

    def fit(self, X, y=None):
        grid.as_image(X)
        self._problem()
        self.n_features_in_ = np.asarray(X).shape[-1]
        return self

    def transform(self, X):
        f = grid.as_image(X)
        u, report = tv.solve_tv(self._problem(), f)
        self.report_ = report
        return u if np.asarray(X).ndim == 3 else u[:, :, 0]
