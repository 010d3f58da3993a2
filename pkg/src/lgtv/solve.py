"""Smooth convex minimization of the discrete denoising energies.

Gradient descent with Armijo backtracking and a Barzilai-Borwein initial
step.  The energies are convex with a strictly convex fidelity term, so the
minimizer is unique; the line search guarantees monotone energy descent.
An optional descending delta-schedule solves a sequence of uniformly convex
problems (quadratic Jacobian penalty) with warm starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import energy, grid

__all__ = ["SolverConfig", "SolverReport", "LineSearchError", "minimize"]

_MAX_HALVINGS = 60


class LineSearchError(RuntimeError):
    """Backtracking failed to find a descent step (numerical breakdown)."""


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 20000
    grad_tol: float = 1e-8
    energy_tol: float = 1e-18
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    init: str | np.ndarray = "data"  # "data" | "zero" | explicit array
    delta_schedule: tuple = ()

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not (self.grad_tol > 0 and self.energy_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 < self.backtrack_factor < 1):
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if not (0 < self.armijo_c < 1):
            raise ValueError("armijo_c must lie in (0, 1)")
        sched = tuple(float(d) for d in self.delta_schedule)
        if any(d < 0 for d in sched):
            raise ValueError("delta schedule entries must be nonnegative")
        if any(a < b for a, b in zip(sched, sched[1:])):
            raise ValueError("delta schedule must be descending")
        object.__setattr__(self, "delta_schedule", sched)


@dataclass
class SolverReport:
    iterations: int
    final_energy: float
    final_grad_norm: float
    energy_trace: list = field(default_factory=list)
    termination: str = "max_iters"  # "grad_tol" | "energy_tol" | "max_iters"

    def to_dict(self):
        return {
            "iterations": self.iterations,
            "final_energy": self.final_energy,
            "final_grad_norm": self.final_grad_norm,
            "energy_trace": list(self.energy_trace),
            "termination": self.termination,
        }


def _initial_point(config, f):
    if isinstance(config.init, np.ndarray):
        u0 = grid.as_image(config.init)
        if u0.shape != f.shape:
            raise ValueError("custom initializer shape does not match data")
        return u0.copy()
    if config.init == "data":
        return f.copy()
    if config.init == "zero":
        return np.zeros_like(f)
    raise ValueError(f"unknown initializer {config.init!r}")


def _descend(model, f, u, config):
    trace = [energy.value(model, u, f)]
    e = trace[0]
    g = energy.gradient(model, u, f)
    gnorm2 = grid.inner(g, g)
    step = 1.0
    iters = 0
    termination = "max_iters"
    for iters in range(1, config.max_iters + 1):
        gnorm = np.sqrt(gnorm2)
        if gnorm <= config.grad_tol:
            termination = "grad_tol"
            iters -= 1
            break
        # Armijo backtracking from the current trial step
        alpha = step
        accepted = False
        for _ in range(_MAX_HALVINGS):
            u_new = u - alpha * g
            e_new = energy.value(model, u_new, f)
            if e_new <= e - config.armijo_c * alpha * gnorm2:
                accepted = True
                break
            alpha *= config.backtrack_factor
        if not accepted:
            raise LineSearchError(
                f"no descent after {_MAX_HALVINGS} halvings at iteration {iters} "
                f"(energy {e:.6e}, grad norm {gnorm:.3e})"
            )
        g_new = energy.gradient(model, u_new, f)
        # Barzilai-Borwein step for the next iteration
        du = u_new - u
        dg = g_new - g
        num = grid.inner(du, du)
        den = grid.inner(du, dg)
        step = num / den if den > 0 else alpha * 2.0
        step = float(np.clip(step, 1e-12, 1e12))
        rel_drop = (e - e_new) / max(abs(e), 1.0)
        u, e, g = u_new, e_new, g_new
        gnorm2 = grid.inner(g, g)
        trace.append(e)
        if rel_drop <= config.energy_tol and np.sqrt(gnorm2) > config.grad_tol:
            termination = "energy_tol"
            break
    else:
        iters = config.max_iters
    final_gnorm = float(np.sqrt(grid.inner(g, g)))
    if final_gnorm <= config.grad_tol:
        termination = "grad_tol"
    return u, e, final_gnorm, iters, termination, trace


def minimize(model: energy.EnergyModel, f, config: SolverConfig | None = None):
    """Minimize the energy for data f; returns (u, SolverReport).

    With a delta schedule, each stage warm-starts from the previous stage's
    solution; the schedule's last entry is the target delta (the model's own
    delta is used when the schedule is empty).
    """
    if config is None:
        config = SolverConfig()
    f = grid.as_image(f)
    u = _initial_point(config, f)

    deltas = config.delta_schedule or (model.delta,)
    total_iters = 0
    for d in deltas:
        staged = model.with_delta(d)
        u, e, gnorm, iters, termination, trace = _descend(staged, f, u, config)
        total_iters += iters
    report = SolverReport(
        iterations=total_iters,
        final_energy=e,
        final_grad_norm=gnorm,
        energy_trace=trace,
        termination=termination,
    )
    return u, report
