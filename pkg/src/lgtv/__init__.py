"""Multi-channel image denoising with convex linear-growth regularizers.

Two regularizer families over the per-pixel 2 x N Jacobian: the isotropic
psi(|grad u|) (Frobenius coupling of channels) and the spectral
sum_i psi(lambda_i(grad u)) (singular-value coupling), both interpolating
toward total variation; plus a duality-gap-certified primal-dual TV solver
and an executable property-verification suite.
"""

from .densities import (
    Linear,
    PhiMu,
    PseudoHuber,
    ScaledPhiMu,
    verify_mu_ellipticity,
)
from .energy import (
    EnergyModel,
    PowerFidelity,
    PseudoHuberFidelity,
    Quadratic,
)
from .estimators import TVDenoiser, VariationalDenoiser
from .solve import SolverConfig, SolverReport, minimize
from .tv import TvProblem, convergence_experiment, solve_tv, tv1d_exact

__version__ = "0.1.0"

__all__ = [
    "Linear",
    "PhiMu",
    "PseudoHuber",
    "ScaledPhiMu",
    "verify_mu_ellipticity",
    "EnergyModel",
    "Quadratic",
    "PseudoHuberFidelity",
    "PowerFidelity",
    "SolverConfig",
    "SolverReport",
    "minimize",
    "TvProblem",
    "solve_tv",
    "tv1d_exact",
    "convergence_experiment",
    "VariationalDenoiser",
    "TVDenoiser",
    "__version__",
]
