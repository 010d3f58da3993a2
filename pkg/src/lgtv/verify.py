"""Executable property suite.

Every structural claim the library relies on (convexity, growth bounds,
degenerate ellipticity, exact adjointness, projection identities, the
convex-hull property of the minimizer, solver descent) is re-checked here
numerically on seeded random data.  The CLI ``verify`` subcommand runs the
suite and fails loudly when any check breaks.
"""

from __future__ import annotations

import io as _stdio
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import constraints, densities, energy, grid, io, solve, spectral, tv

__all__ = ["CheckResult", "run_checks", "format_table"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _density_zoo():
    return [
        densities.PhiMu(1.5),
        densities.PhiMu(2.0),
        densities.PhiMu(3.0),
        densities.ScaledPhiMu(4.0),
        densities.ScaledPhiMu(50.0),
        densities.PseudoHuber(1.0),
        densities.PseudoHuber(0.1),
        densities.Linear(),
    ]


# ---------------------------------------------------------------------------
# densities

def check_density_closed_forms(rng):
    errs = []
    if abs(densities.PhiMu(2.0).value(1.0) - (1.0 - np.log(2.0))) > 1e-14:
        errs.append("Phi_2(1)")
    if abs(densities.PseudoHuber(3.0).value(4.0) - 2.0) > 1e-14:
        errs.append("pseudo-huber(3;4)")
    if abs(densities.ScaledPhiMu(50.0).value(5.0) - 5.0) > 1.0 / 48.0:
        errs.append("scaled TV limit")
    if abs(densities.PhiMu(3.0).deriv2(1.0) - 0.125) > 1e-14:
        errs.append("Phi_3''(1)")
    return not errs, ",".join(errs)


def check_density_derivatives(rng):
    # second differences of the value are meaningless below the float64
    # noise floor, hence the absolute scale floor and moderate mu values
    worst = 0.0
    t = rng.uniform(0.01, 100.0, size=100)
    zoo = [
        densities.PhiMu(1.5),
        densities.PhiMu(2.0),
        densities.PhiMu(3.0),
        densities.ScaledPhiMu(4.0),
        densities.PseudoHuber(1.0),
        densities.PseudoHuber(0.1),
        densities.Linear(),
    ]
    for d in zoo:
        h = 1e-6 * np.maximum(t, 1.0)
        fd1 = (d.value(t + h) - d.value(t - h)) / (2 * h)
        rel1 = np.max(np.abs(fd1 - d.deriv(t)) / np.maximum(np.abs(d.deriv(t)), 1e-8))
        worst = max(worst, rel1)
        if isinstance(d, densities.Linear):
            continue
        h2 = 3e-3 * np.maximum(t, 1.0)
        fd2 = (d.value(t + h2) - 2 * d.value(t) + d.value(t - h2)) / h2**2
        scale = np.maximum(np.abs(d.deriv2(t)), 1e-6)
        rel2 = np.max(np.abs(fd2 - d.deriv2(t)) / scale)
        worst = max(worst, rel2 * 1e-2)  # second-difference tolerance is 1e-4
    return worst <= 1e-6, f"worst rel err {worst:.2e}"


def check_density_convexity(rng):
    worst = -np.inf
    a = rng.uniform(0, 50, size=10000)
    b = rng.uniform(0, 50, size=10000)
    t = rng.uniform(0, 1, size=10000)
    for d in _density_zoo():
        mid = d.value(t * a + (1 - t) * b)
        chord = t * d.value(a) + (1 - t) * d.value(b)
        worst = max(worst, float(np.max(mid - chord)))
    return worst <= 1e-12, f"max violation {worst:.2e}"


def check_density_monotone(rng):
    grid_t = np.linspace(0.0, 200.0, 2000)
    ok = True
    for d in _density_zoo():
        v = d.value(grid_t)
        dv = d.deriv(grid_t)
        if np.any(np.diff(v) < -1e-12) or np.any(dv < -1e-14) or np.any(np.diff(dv) < -1e-10):
            ok = False
    return ok, ""


def check_tv_limit(rng):
    worst = 0.0
    for mu in (10.0, 100.0, 1000.0):
        d = densities.PhiMu(mu)
        for t in (0.1, 1.0, 10.0, 100.0):
            err = abs((mu - 1.0) * d.value(t) - t)
            bound = 1.0 / (mu - 2.0)
            worst = max(worst, err - bound)
    return worst <= 1e-12, f"max excess {worst:.2e}"


def check_linear_growth(rng):
    t = np.geomspace(1e-3, 1e6, 500)
    details = []
    ok = True
    for d in (densities.ScaledPhiMu(4.0), densities.PseudoHuber(1.0)):
        c = float(np.max(t - d.value(t)))
        details.append(f"{type(d).__name__}: c={c:.3f}")
        if not np.all(d.value(t) >= t - c - 1e-9):
            ok = False
    return ok, "; ".join(details)


def check_mu_ellipticity(rng):
    cases = [
        (densities.PseudoHuber(1.0), 3.0, True),
        (densities.PhiMu(1.2), 1.2, True),
        (densities.PhiMu(1.5), 1.5, True),
        (densities.PhiMu(3.0), 3.0, True),
        (densities.PseudoHuber(1.0), 2.0, False),
    ]
    bad = []
    for d, mu, expect in cases:
        cert = densities.verify_mu_ellipticity(d, mu)
        if cert.ok is not expect:
            bad.append(f"{type(d).__name__}/mu={mu}")
    return not bad, ",".join(bad)


def check_recession_slopes(rng):
    big = 1e6
    ok = True
    for d in _density_zoo():
        slope = d.recession_slope
        if d.superlinear:
            continue
        # the sublinear remainder of Phi_mu decays only like T^(mu-2)
        # for mu < 2, so the 10/T rate is limited to the other families
        bound = 10.0 / big
        mu = getattr(d, "mu", None)
        if mu is not None and mu <= 2:
            bound = 10.0 * max(np.log1p(big) / big, big ** (mu - 2.0))
        if abs(d.value(big) / big - slope) > bound:
            ok = False
    if not densities.PhiMu(1.0).superlinear or not densities.PhiMu(0.5).superlinear:
        ok = False
    return ok, ""


# ---------------------------------------------------------------------------
# discrete calculus

def check_adjointness(rng):
    worst = 0.0
    for _ in range(20):
        u = rng.standard_normal((6, 7, 3))
        p = rng.standard_normal((6, 7, 2, 3))
        scale = grid.norm(u) * np.sqrt(grid.grad_inner(p, p))
        worst = max(
            worst,
            abs(grid.grad_inner(grid.gradient(u), p) + grid.inner(u, grid.divergence(p)))
            / max(scale, 1.0),
        )
    return worst <= 1e-12, f"worst residual {worst:.2e}"


def check_gradient_linearity(rng):
    u = rng.standard_normal((8, 9, 2))
    v = rng.standard_normal((8, 9, 2))
    lhs = grid.gradient(2.5 * u - 1.25 * v)
    rhs = 2.5 * grid.gradient(u) - 1.25 * grid.gradient(v)
    dev = float(np.max(np.abs(lhs - rhs)))
    return dev <= 1e-13, f"max dev {dev:.2e}"


def check_operator_norm(rng):
    est = grid.gradient_norm_bound(24, 24, iters=2000, tol=1e-10)
    return 0 < est <= 8.0 + 1e-6, f"||grad||^2 ~ {est:.6f}"


# ---------------------------------------------------------------------------
# spectral layer

def check_svd_reconstruction(rng):
    worst = 0.0
    for n in (1, 2, 3, 5):
        p = rng.standard_normal((50, 2, n))
        u, s, vt = spectral.svd2n(p)
        rec = np.einsum("...ik,...k,...kj->...ij", u, s, vt)
        scale = np.maximum(np.linalg.norm(p, axis=(-2, -1)), 1e-30)
        worst = max(worst, float(np.max(np.linalg.norm(rec - p, axis=(-2, -1)) / scale)))
        lam2 = spectral.singular_values(p) ** 2
        sig = np.sort(np.linalg.eigvalsh(p @ np.swapaxes(p, -1, -2)), axis=-1)[..., ::-1]
        worst = max(worst, float(np.max(np.abs(lam2 - sig) / np.maximum(sig.max(-1, keepdims=True), 1e-30))))
    return worst <= 1e-10, f"worst rel err {worst:.2e}"


def _random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def check_orthogonal_invariance(rng):
    worst = 0.0
    d = densities.ScaledPhiMu(3.0)
    for n in (2, 4):
        for _ in range(20):
            p = rng.standard_normal((2, n)) * 3
            q2 = _random_orthogonal(rng, 2)
            qn = _random_orthogonal(rng, n)
            pr = q2 @ p @ qn
            worst = max(worst, abs(spectral.f_psi_value(d, p) - spectral.f_psi_value(d, pr)))
            worst = max(
                worst,
                abs(spectral.f_star_value(d, 0.05, p) - spectral.f_star_value(d, 0.05, pr)),
            )
    return worst <= 1e-10, f"worst dev {worst:.2e}"


def check_spectral_convexity(rng):
    worst = -np.inf
    d = densities.PseudoHuber(0.5)
    for n in (1, 3):
        p = rng.standard_normal((10000, 2, n)) * 5
        q = rng.standard_normal((10000, 2, n)) * 5
        t = rng.uniform(0, 1, size=(10000, 1, 1))
        for fun in (
            lambda m: spectral.f_psi_value(d, m),
            lambda m: spectral.f_star_value(d, 0.1, m),
        ):
            mid = fun(t * p + (1 - t) * q)
            chord = t[:, 0, 0] * fun(p) + (1 - t[:, 0, 0]) * fun(q)
            worst = max(worst, float(np.max(mid - chord)))
    return worst <= 1e-10, f"max violation {worst:.2e}"


def _fd_matrix_gradient(fun, p, h=1e-6):
    out = np.zeros_like(p)
    for i in range(p.shape[0]):
        for j in range(p.shape[1]):
            e = np.zeros_like(p)
            e[i, j] = h
            out[i, j] = (fun(p + e) - fun(p - e)) / (2 * h)
    return out


def check_f_star_gradient(rng):
    d = densities.ScaledPhiMu(2.5)
    eps = 0.07
    fun = lambda m: spectral.f_star_value(d, eps, m)
    worst = 0.0
    for n in (1, 2, 4):
        p = rng.standard_normal((2, n))
        g = spectral.f_star_gradient(d, eps, p)
        fd = _fd_matrix_gradient(fun, p)
        worst = max(worst, float(np.max(np.abs(g - fd)) / max(np.max(np.abs(fd)), 1e-12)))
    # rank deficient
    for n in (2, 3):
        p = np.outer(rng.standard_normal(2), rng.standard_normal(n))
        g = spectral.f_star_gradient(d, eps, p)
        fd = _fd_matrix_gradient(fun, p, h=1e-5)
        worst = max(worst, float(np.max(np.abs(g - fd)) / max(np.max(np.abs(fd)), 1e-12)))
    return worst <= 1e-5, f"worst rel err {worst:.2e}"


def check_growth_sandwich(rng):
    d = densities.ScaledPhiMu(4.0)
    # scalar growth constants: c1 t - c2 <= psi(t) <= c3 t + c4
    t = np.geomspace(1e-3, 1e3, 300)
    c1, c3 = 0.5, 1.0
    c2 = float(np.max(c1 * t - d.value(t)))
    c4 = float(np.max(d.value(t) - c3 * t))
    p = rng.standard_normal((10000, 2, 3)) * rng.uniform(0, 500, size=(10000, 1, 1))
    fro = spectral.frobenius_norm(p)
    val = spectral.f_psi_value(d, p)
    # nuclear >= frobenius >= nuclear/sqrt(2) transfers the scalar constants
    lo = c1 * fro - 2 * c2
    hi = c3 * np.sqrt(2.0) * fro + 2 * c4
    ok = bool(np.all(val >= lo - 1e-9) and np.all(val <= hi + 1e-9))
    return ok, f"c*=({c1:.2f},{2*c2:.2f},{c3*np.sqrt(2):.2f},{2*c4:.2f})"


def check_hessian_decay(rng):
    d = densities.ScaledPhiMu(3.0)
    eps = 0.1
    nu4 = 0.0
    ok = True
    for _ in range(200):
        p = rng.standard_normal((2, 2)) * rng.uniform(0, 1000)
        norm_p = np.linalg.norm(p)
        q = rng.standard_normal((2, 2))
        q /= np.linalg.norm(q)
        h = 1e-4 * max(1.0, norm_p * 1e-4)
        gp = spectral.f_star_gradient(d, eps, p + h * q)
        gm = spectral.f_star_gradient(d, eps, p - h * q)
        curv = float(np.sum((gp - gm) * q)) / (2 * h)
        nu4 = max(nu4, curv * (1.0 + norm_p))
        if curv < -1e-8:
            ok = False
    return ok and np.isfinite(nu4), f"measured nu4 = {nu4:.3f}"


def check_recession_function(rng):
    d = densities.ScaledPhiMu(4.0)
    p = rng.standard_normal((2, 3))
    target = spectral.recession_value(d, p)
    prev = np.inf
    ok = True
    for t in (1e2, 1e4, 1e6):
        err = abs(spectral.f_psi_value(d, t * p) / t - target)
        if err > prev + 1e-12:
            ok = False
        prev = err
    if abs(spectral.recession_value(densities.Linear(), p) - spectral.nuclear_norm(p)) > 1e-12:
        ok = False
    return ok and prev <= 1e-4, f"final err {prev:.2e}"


# ---------------------------------------------------------------------------
# constraints

def _set_zoo():
    return [
        constraints.Box(lo=[0.0, 0.0, 0.0], hi=[1.0, 1.0, 1.0]),
        constraints.Ball(center=[0.5, -1.0], radius=2.0),
        constraints.PsdCone(m=2, alpha=0.0),
        constraints.PsdCone(m=2, alpha=0.3),
    ]


def check_projection_idempotent(rng):
    ok = True
    for s in _set_zoo():
        y = rng.uniform(-5, 5, size=(500, s.dim))
        p1 = s.project(y)
        p2 = s.project(p1)
        if np.max(np.abs(p1 - p2)) > 1e-12:
            ok = False
    return ok, ""


def _sample_in_set(s, rng, count):
    y = rng.uniform(-5, 5, size=(count, s.dim))
    return s.project(y)


def check_variational_inequality(rng):
    worst = -np.inf
    for s in _set_zoo():
        y = rng.uniform(-5, 5, size=(200, s.dim))
        y0 = s.project(y)
        v = _sample_in_set(s, rng, 1000)
        # (y - y0) . (v - y0) <= 0 for every v in K
        d = y - y0
        dots = d @ v.T - np.sum(d * y0, axis=1)[:, None]
        worst = max(worst, float(np.max(dots)))
    return worst <= 1e-10, f"max dot {worst:.2e}"


def check_nonexpansive_sets(rng):
    ok = True
    for s in _set_zoo():
        if not constraints.check_nonexpansive(s, trials=10000, seed=int(rng.integers(1 << 31))):
            ok = False
    return ok, ""


def check_psd_projection(rng):
    cone = constraints.PsdCone(m=2, alpha=0.0)
    y = np.array([3.0, 0.0, 0.0, -1.0])
    want = np.array([3.0, 0.0, 0.0, 0.0])
    return bool(np.max(np.abs(cone.project(y) - want)) < 1e-12), ""


# ---------------------------------------------------------------------------
# energies and solver

def _models(rng):
    mask = rng.uniform(0, 1, size=(6, 6))
    return [
        energy.EnergyModel(density=densities.PhiMu(1.5), lam=1.3),
        energy.EnergyModel(density=densities.ScaledPhiMu(8.0), lam=0.7, delta=1e-3),
        energy.EnergyModel(
            density=densities.PseudoHuber(0.2), lam=2.0,
            fidelity=energy.PseudoHuberFidelity(0.5),
        ),
        energy.EnergyModel(
            density=densities.PhiMu(2.0), lam=1.0, fidelity=energy.PowerFidelity(1.5),
        ),
        energy.EnergyModel(
            density=densities.PhiMu(1.5), family="blend",
            density2=densities.PhiMu(6.0), blend_mask=mask, lam=1.0,
        ),
        energy.EnergyModel(
            density=densities.ScaledPhiMu(4.0), family="anisotropic",
            smoothing_eps=0.01, lam=1.0,
        ),
    ]


def check_energy_gradients(rng):
    worst = 0.0
    for model in _models(rng):
        u = rng.standard_normal((6, 6, 2))
        f = rng.standard_normal((6, 6, 2))
        v = rng.standard_normal((6, 6, 2))
        g = energy.gradient(model, u, f)
        h = 1e-5
        fd = (energy.value(model, u + h * v, f) - energy.value(model, u - h * v, f)) / (2 * h)
        scale = max(abs(fd), 1.0)
        worst = max(worst, abs(grid.inner(g, v) - fd) / scale)
    return worst <= 1e-5, f"worst rel err {worst:.2e}"


def check_energy_convexity(rng):
    worst = -np.inf
    strict_ok = True
    for model in _models(rng):
        f = rng.standard_normal((6, 6, 2))
        for _ in range(20):
            u = rng.standard_normal((6, 6, 2))
            v = rng.standard_normal((6, 6, 2))
            mid = energy.value(model, 0.5 * (u + v), f)
            chord = 0.5 * (energy.value(model, u, f) + energy.value(model, v, f))
            worst = max(worst, mid - chord)
            if isinstance(model.fidelity, energy.Quadratic):
                margin = model.lam / 8.0 * float(np.mean(np.sum((u - v) ** 2, axis=-1)))
                if mid >= chord - margin + 1e-10:
                    strict_ok = False
    return worst <= 1e-10 and strict_ok, f"max violation {worst:.2e}"


def check_solver_basics(rng):
    f = np.full((8, 8, 2), 0.37)
    model = energy.EnergyModel(density=densities.PhiMu(1.5), lam=1.0)
    u, rep = solve.minimize(model, f, solve.SolverConfig(grad_tol=1e-10))
    if rep.iterations > 1 or np.max(np.abs(u - f)) > 1e-12:
        return False, "constant fixed point"
    f = rng.uniform(0.2, 0.8, size=(10, 10, 2))
    u, rep = solve.minimize(model, f, solve.SolverConfig(grad_tol=1e-9))
    if np.any(np.diff(rep.energy_trace) > 0):
        return False, "energy trace increased"
    return True, f"{rep.iterations} iters, grad {rep.final_grad_norm:.1e}"


def check_solver_uniqueness(rng):
    f = rng.uniform(0, 1, size=(16, 16, 3))
    model = energy.EnergyModel(density=densities.PseudoHuber(0.1), lam=1.0)
    tol = 1e-8
    ua, _ = solve.minimize(model, f, solve.SolverConfig(grad_tol=tol, init="data"))
    ub, _ = solve.minimize(model, f, solve.SolverConfig(grad_tol=tol, init="zero"))
    dist = grid.lp_distance(ua, ub, 2.0)
    return dist <= 10 * tol / model.lam, f"two-init distance {dist:.2e}"


def check_hull_property(rng):
    f = rng.uniform(0.2, 0.8, size=(16, 16, 3))
    box = constraints.Box(lo=[0.2] * 3, hi=[0.8] * 3)
    model = energy.EnergyModel(density=densities.PhiMu(1.5), lam=1.0)
    viols = []
    for tol in (1e-4, 1e-6):
        u, _ = solve.minimize(model, f, solve.SolverConfig(grad_tol=tol, max_iters=100000))
        viols.append(constraints.hull_violation(box, u))
    ok = viols[-1] <= 1e-3 and viols[-1] <= viols[0] + 1e-12
    return ok, f"violations {viols[0]:.2e} -> {viols[-1]:.2e}"


# ---------------------------------------------------------------------------
# TV oracle

def check_tv_certificates(rng):
    f = rng.uniform(0, 1, size=(16, 16, 3))
    ok = True
    details = []
    for variant in ("frobenius", "nuclear"):
        prob = tv.TvProblem(variant=variant, lam=4.0, gap_tol=1e-7, max_iters=50000)
        u, rep = tv.solve_tv(prob, f)
        details.append(f"{variant}: gap {rep.gap:.1e}")
        if not rep.converged or rep.gap < -1e-12:
            ok = False
    return ok, "; ".join(details)


def check_tv_1d_oracle(rng):
    f = np.repeat(rng.standard_normal(4), 8)[None, :, None] + 0.1 * rng.standard_normal((1, 32, 1))
    lam = 5.0
    prob = tv.TvProblem(variant="frobenius", lam=lam, gap_tol=1e-10, max_iters=300000)
    u2d, rep = tv.solve_tv(prob, f)
    u1d = tv.tv1d_exact(f.ravel(), 1.0 / lam)
    err = float(np.max(np.abs(u2d.ravel() - u1d)))
    return err <= 1e-4, f"L-inf {err:.2e}"


def check_norm_ordering(rng):
    p = rng.standard_normal((5000, 2, 3))
    nuc = spectral.nuclear_norm(p)
    fro = spectral.frobenius_norm(p)
    if not np.all(nuc >= fro - 1e-12):
        return False, "pixelwise ordering"
    f = rng.uniform(0, 1, size=(12, 12, 3))
    u = rng.uniform(0, 1, size=(12, 12, 3))
    e_f = tv.tv_energy(tv.TvProblem(variant="frobenius", lam=1.0), u, f)
    e_n = tv.tv_energy(tv.TvProblem(variant="nuclear", lam=1.0), u, f)
    return e_n >= e_f - 1e-12, f"nuclear {e_n:.4f} >= frobenius {e_f:.4f}"


def check_dual_feasibility(rng):
    q = rng.standard_normal((200, 2, 3)) * 3
    qf = q / np.maximum(np.sqrt(np.sum(q * q, axis=(-2, -1), keepdims=True)), 1.0)
    if np.any(np.sqrt(np.sum(qf * qf, axis=(-2, -1))) > 1 + 1e-12):
        return False, "frobenius ball"
    qs = spectral.project_spectral_ball(q, 1.0)
    top = spectral.singular_values(qs)[..., 0]
    return bool(np.all(top <= 1 + 1e-12)), f"max sv {float(np.max(top)):.12f}"


# ---------------------------------------------------------------------------
# I/O

def check_io_roundtrip(rng):
    with tempfile.TemporaryDirectory() as tmp:
        u = rng.standard_normal((4, 5, 6))
        path = Path(tmp) / "field.mcf"
        io.write_image(path, u)
        v = io.read_image(path)
        if not np.array_equal(u, v):
            return False, "MCF not bit-exact"
        lattice = rng.integers(0, 256, size=(5, 4, 3)).astype(float) / 255.0
        ppath = Path(tmp) / "img.ppm"
        io.write_image(ppath, lattice)
        w = io.read_image(ppath)
        if np.max(np.abs(w - lattice)) > 1e-15:
            return False, "PPM lattice round trip"
    return True, ""


# ---------------------------------------------------------------------------

_CHECKS = [
    ("density closed forms", check_density_closed_forms),
    ("density derivative consistency", check_density_derivatives),
    ("density convexity", check_density_convexity),
    ("density monotonicity", check_density_monotone),
    ("TV limit of scaled family", check_tv_limit),
    ("linear growth constants", check_linear_growth),
    ("mu-ellipticity certificates", check_mu_ellipticity),
    ("recession slopes", check_recession_slopes),
    ("gradient/divergence adjointness", check_adjointness),
    ("gradient linearity", check_gradient_linearity),
    ("gradient operator norm", check_operator_norm),
    ("SVD reconstruction", check_svd_reconstruction),
    ("orthogonal invariance", check_orthogonal_invariance),
    ("spectral convexity", check_spectral_convexity),
    ("smoothed spectral gradient", check_f_star_gradient),
    ("spectral growth sandwich", check_growth_sandwich),
    ("spectral Hessian decay", check_hessian_decay),
    ("spectral recession function", check_recession_function),
    ("projection idempotence", check_projection_idempotent),
    ("projection variational inequality", check_variational_inequality),
    ("projection non-expansiveness", check_nonexpansive_sets),
    ("PSD cone projection", check_psd_projection),
    ("energy gradients vs finite differences", check_energy_gradients),
    ("energy convexity", check_energy_convexity),
    ("solver descent and fixed point", check_solver_basics),
    ("solver uniqueness probe", check_solver_uniqueness),
    ("convex-hull property", check_hull_property),
    ("TV duality-gap certificates", check_tv_certificates),
    ("TV 1-D exact oracle agreement", check_tv_1d_oracle),
    ("nuclear vs Frobenius ordering", check_norm_ordering),
    ("dual ball feasibility", check_dual_feasibility),
    ("image I/O round trips", check_io_roundtrip),
]


def run_checks(seed=0, names=None):
    """Run the full suite (or a name subset); returns a list of CheckResult."""
    if names is not None:
        known = {name for name, _ in _CHECKS}
        unknown = [n for n in names if n not in known]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
    results = []
    for i, (name, fn) in enumerate(_CHECKS):
        if names is not None and name not in names:
            continue
        rng = np.random.default_rng([seed, i])
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"exception: {exc!r}"
        results.append(CheckResult(name=name, ok=bool(ok), detail=detail or "ok"))
    return results


def format_table(results):
    width = max(len(r.name) for r in results)
    out = _stdio.StringIO()
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        line = f"{r.name:<{width}}  {status}"
        if r.detail:
            line += f"  {r.detail}"
        print(line, file=out)
    n_fail = sum(not r.ok for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed", file=out)
    return out.getvalue()
