"""Acceptance gate: the ten release criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
print; under plain pytest they appear in the captured output of each test.
"""

import numpy as np
import pytest

from lgtv import constraints, energy, grid, io, solve, spectral, tv, verify
from lgtv.cli import main as cli_main
from lgtv.densities import (
    Linear,
    PhiMu,
    PseudoHuber,
    ScaledPhiMu,
    verify_mu_ellipticity,
)

RNG_SEED = 20240824


def _report(num, label, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {label}")
    assert ok, f"criterion {num} ({label}) failed"


def _piecewise_constant(rng, h=32, w=32, n=3, sigma=0.08):
    f = np.zeros((h, w, n))
    f[: h // 2, :, 0] = 1.0
    f[:, : w // 2, 1 % n] = 0.7
    f[h // 4 : 3 * h // 4, w // 4 : 3 * w // 4, 2 % n] = 0.4
    return f + sigma * rng.standard_normal(f.shape)


def test_criterion_1_density_suite():
    rng = np.random.default_rng([RNG_SEED, 1])
    ok = True
    # closed-form anchors
    ok &= abs(float(PhiMu(2.0).value(1.0)) - (1.0 - np.log(2.0))) <= 1e-14
    ok &= abs(float(PseudoHuber(3.0).value(4.0)) - 2.0) <= 1e-14
    # derivative / finite-difference agreement
    t = rng.uniform(0.01, 100.0, size=200)
    for d in (PhiMu(1.5), PhiMu(3.0), ScaledPhiMu(4.0), PseudoHuber(1.0)):
        h = 1e-6 * np.maximum(t, 1.0)
        fd1 = (d.value(t + h) - d.value(t - h)) / (2 * h)
        ok &= bool(
            np.max(np.abs(fd1 - d.deriv(t)) / np.maximum(np.abs(d.deriv(t)), 1e-8))
            <= 1e-6
        )
        h2 = 3e-3 * np.maximum(t, 1.0)
        fd2 = (d.value(t + h2) - 2 * d.value(t) + d.value(t - h2)) / h2**2
        ok &= bool(
            np.max(np.abs(fd2 - d.deriv2(t)) / np.maximum(np.abs(d.deriv2(t)), 1e-6))
            <= 1e-4
        )
    # convexity midpoints
    a = rng.uniform(0, 100, size=10000)
    b = rng.uniform(0, 100, size=10000)
    s = rng.uniform(0, 1, size=10000)
    for d in (PhiMu(1.5), PhiMu(3.0), ScaledPhiMu(8.0), PseudoHuber(0.3), Linear()):
        mid = d.value(s * a + (1 - s) * b)
        chord = s * d.value(a) + (1 - s) * d.value(b)
        ok &= bool(np.max(mid - chord) <= 1e-12)
    # TV limit bound
    for mu in (10.0, 100.0, 1000.0):
        d = PhiMu(mu)
        for tt in (0.1, 1.0, 10.0, 100.0):
            ok &= abs((mu - 1.0) * float(d.value(tt)) - tt) <= 1.0 / (mu - 2.0) + 1e-12
    _report(1, "density closed forms, derivatives, convexity, TV limit", ok)


def test_criterion_2_mu_ellipticity():
    ok = verify_mu_ellipticity(PseudoHuber(1.0), 3.0).ok
    for mu in (1.2, 1.5, 3.0):
        ok &= verify_mu_ellipticity(PhiMu(mu), mu).ok
    ok &= not verify_mu_ellipticity(PseudoHuber(1.0), 2.0).ok
    _report(2, "mu-ellipticity certificates (including the mu=2 rejection)", ok)


def test_criterion_3_spectral_layer():
    rng = np.random.default_rng([RNG_SEED, 3])
    ok = True
    d = PhiMu(2.0)
    eps = 0.05
    # SVD reconstruction
    p = rng.standard_normal((200, 2, 3))
    u, s, vt = spectral.svd2n(p)
    back = np.einsum("...ik,...k,...kj->...ij", u, s, vt)
    ok &= bool(np.max(np.abs(back - p)) <= 1e-12 * max(1.0, float(np.max(np.abs(p)))))
    # orthogonal invariance of F_psi and F*
    theta = rng.uniform(0, 2 * np.pi)
    q2 = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    qn, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    rot = np.einsum("ij,bjk,kl->bil", q2, p, qn)
    ok &= bool(
        np.max(np.abs(spectral.f_psi_value(d, p) - spectral.f_psi_value(d, rot)))
        <= 1e-10
    )
    ok &= bool(
        np.max(
            np.abs(spectral.f_star_value(d, eps, p) - spectral.f_star_value(d, eps, rot))
        )
        <= 1e-10
    )
    # convexity of F* on 1e4 random midpoints
    a = rng.standard_normal((10000, 2, 3))
    b = rng.standard_normal((10000, 2, 3))
    s1 = rng.uniform(0, 1, size=(10000, 1, 1))
    mid = spectral.f_star_value(d, eps, s1 * a + (1 - s1) * b)
    chord = (
        s1[:, 0, 0] * spectral.f_star_value(d, eps, a)
        + (1 - s1[:, 0, 0]) * spectral.f_star_value(d, eps, b)
    )
    ok &= bool(np.max(mid - chord) <= 1e-10)
    # gradient vs finite differences, full-rank and rank-deficient
    for mat in (rng.standard_normal((2, 3)) + 0.2,
                rng.standard_normal((2, 1)) @ rng.standard_normal((1, 3))):
        g = spectral.f_star_gradient(d, eps, mat)
        h = 1e-6
        worst = 0.0
        for i in range(2):
            for j in range(3):
                e = np.zeros_like(mat)
                e[i, j] = h
                fd = (
                    float(spectral.f_star_value(d, eps, mat + e))
                    - float(spectral.f_star_value(d, eps, mat - e))
                ) / (2 * h)
                worst = max(worst, abs(fd - g[i, j]) / max(abs(fd), 1e-8))
        ok &= worst <= 1e-5
    # linear growth sandwich with measured constants
    dlin = ScaledPhiMu(4.0)
    big = rng.standard_normal((2000, 2, 3)) * rng.uniform(0.01, 100, size=(2000, 1, 1))
    vals = spectral.f_star_value(dlin, eps, big)
    fro = spectral.frobenius_norm(big)
    c2 = float(np.max(fro - vals))
    c4 = float(np.max(vals - 2.0 * fro))
    ok &= bool(np.all(vals >= fro - c2 - 1e-9)) and bool(np.all(vals <= 2.0 * fro + c4 + 1e-9))
    ok &= np.isfinite(c2) and np.isfinite(c4) and c2 < 10 and c4 < 10
    _report(3, "spectral SVD, invariance, convexity, gradients, growth sandwich", ok)


def test_criterion_4_discrete_calculus():
    rng = np.random.default_rng([RNG_SEED, 4])
    ok = True
    for shape in [(1, 1, 1), (1, 9, 2), (9, 1, 1), (7, 5, 3), (16, 16, 4)]:
        u = rng.standard_normal(shape)
        p = rng.standard_normal(shape[:2] + (2, shape[2]))
        lhs = grid.grad_inner(grid.gradient(u), p)
        rhs = -grid.inner(u, grid.divergence(p))
        ok &= abs(lhs - rhs) <= 1e-12
    est = grid.gradient_norm_bound(32, 32)
    ok &= est <= 8.0 + 1e-9
    _report(4, "exact adjointness and operator norm bound 8", ok)


def test_criterion_5_solver():
    rng = np.random.default_rng([RNG_SEED, 5])
    lam = 1.0
    grad_tol = 1e-8
    model = energy.EnergyModel(density=PhiMu(1.5), lam=lam)
    f = _piecewise_constant(rng, h=16, w=16, n=3)
    ok = True
    # monotone descent
    u1, rep1 = solve.minimize(model, f, solve.SolverConfig(grad_tol=grad_tol, init="data"))
    trace = np.array(rep1.energy_trace)
    ok &= bool(np.all(np.diff(trace) <= 0.0))
    # constant data is a fixed point
    const = np.full((8, 8, 2), 0.3)
    u_c, rep_c = solve.minimize(model, const, solve.SolverConfig(grad_tol=grad_tol))
    ok &= rep_c.iterations == 0 and bool(np.array_equal(u_c, const))
    # two-init uniqueness probe
    u2, _ = solve.minimize(model, f, solve.SolverConfig(grad_tol=grad_tol, init="zero"))
    ok &= grid.lp_distance(u1, u2, 2.0) <= 10.0 * grad_tol / lam
    _report(5, "solver descent, fixed point, two-init uniqueness", ok)


def test_criterion_6_convex_hull():
    rng = np.random.default_rng([RNG_SEED, 6])
    f = rng.uniform(0.2, 0.8, size=(24, 24, 3))
    box = constraints.Box(lo=[0.2, 0.2, 0.2], hi=[0.8, 0.8, 0.8])
    model = energy.EnergyModel(density=PhiMu(1.5), lam=1.0)
    violations = []
    for gt in (1e-4, 1e-6, 1e-8):
        u, _ = solve.minimize(model, f, solve.SolverConfig(grad_tol=gt))
        violations.append(constraints.hull_violation(box, u))
    ok = violations[-1] <= 1e-3
    ok &= all(b <= a + 1e-12 for a, b in zip(violations, violations[1:]))
    _report(6, f"convex-hull property (violations {violations})", ok)


def test_criterion_7_tv_oracle():
    rng = np.random.default_rng([RNG_SEED, 7])
    f = _piecewise_constant(rng)
    ok = True
    for variant in ("frobenius", "nuclear"):
        problem = tv.TvProblem(variant=variant, lam=4.0, gap_tol=1e-6, max_iters=400000)
        _, report = tv.solve_tv(problem, f)
        ok &= report.converged and report.gap <= 1e-6
    # 1-D taut-string agreement
    lam = 2.0
    f1d = rng.standard_normal(48)
    exact = tv.tv1d_exact(f1d, 1.0 / lam)
    u, rep = tv.solve_tv(
        tv.TvProblem(lam=lam, gap_tol=1e-10, max_iters=500000), f1d.reshape(1, -1, 1)
    )
    ok &= rep.converged and bool(np.max(np.abs(u.ravel() - exact)) <= 1e-4)
    # nuclear >= Frobenius pixel norms on random Jacobian fields
    p = rng.standard_normal((2000, 2, 3))
    ok &= bool(np.all(spectral.nuclear_norm(p) >= spectral.frobenius_norm(p) - 1e-12))
    _report(7, "TV gap certificates, 1-D oracle, norm ordering", ok)


def test_criterion_8_convergence_to_tv():
    rng = np.random.default_rng([RNG_SEED, 8])
    f = _piecewise_constant(rng)
    lam = 4.0
    grad_tol = 1e-7
    gap_tol = 1e-8
    slack = 2.0 * (grad_tol + gap_tol)
    cfg = solve.SolverConfig(grad_tol=grad_tol, max_iters=200000)
    mu_list = [4.0, 8.0, 16.0, 32.0, 64.0]

    def sweep(family, params, template, variant):
        problem = tv.TvProblem(
            variant=variant, lam=lam, gap_tol=gap_tol, max_iters=500000
        )
        rows = tv.convergence_experiment(family, params, f, template, problem, config=cfg)
        l2 = [r["l2"] for r in rows]
        mono = all(b <= a + slack for a, b in zip(l2, l2[1:]))
        halved = l2[-1] <= 0.5 * l2[0]
        return mono and halved, l2

    iso = energy.EnergyModel(density=PhiMu(4.0), lam=lam)
    aniso = energy.EnergyModel(
        density=PhiMu(4.0), family="anisotropic", lam=lam, smoothing_eps=1e-4
    )
    ok1, l2_iso = sweep("mu", mu_list, iso, "frobenius")
    ok2, l2_aniso = sweep("mu", mu_list, aniso, "nuclear")
    ok3, l2_eps = sweep("eps", [0.5, 0.1, 0.02], iso, "frobenius")
    _report(
        8,
        "convergence to TV "
        f"(iso {l2_iso[0]:.4f}->{l2_iso[-1]:.4f}, "
        f"aniso {l2_aniso[0]:.4f}->{l2_aniso[-1]:.4f}, "
        f"eps {l2_eps[0]:.4f}->{l2_eps[-1]:.4f})",
        ok1 and ok2 and ok3,
    )


def test_criterion_9_projections():
    rng = np.random.default_rng([RNG_SEED, 9])
    sets = [
        constraints.Box(lo=[0.0, -1.0], hi=[1.0, 2.0]),
        constraints.Ball(center=[0.5, 0.5, 0.5], radius=1.5),
        constraints.PsdCone(m=2, alpha=0.1),
    ]
    ok = True
    for s in sets:
        y = rng.uniform(-8, 8, size=(1000, s.dim))
        y0 = s.project(y)
        ok &= bool(np.max(np.abs(s.project(y0) - y0)) <= 1e-10)
        v = s.project(rng.uniform(-8, 8, size=(1000, s.dim)))
        d = y - y0
        dots = d @ v.T - np.sum(d * y0, axis=1)[:, None]
        ok &= bool(np.max(dots) <= 1e-10)
        ok &= constraints.check_nonexpansive(s, trials=10000, seed=9)
    _report(9, "projection idempotence, variational inequality, non-expansiveness", ok)


def test_criterion_10_io_and_mutation(tmp_path, monkeypatch, capsys):
    rng = np.random.default_rng([RNG_SEED, 10])
    ok = True
    # MCF bit-exact round trip
    u = rng.standard_normal((6, 7, 4)) * 1e3
    path = tmp_path / "a.mcf"
    io.write_image(str(path), u)
    ok &= bool(np.array_equal(io.read_image(str(path)).view(np.uint64), u.view(np.uint64)))
    # PGM/PPM exact on the 8-bit lattice
    for ext, n in (("pgm", 1), ("ppm", 3)):
        img = rng.integers(0, 256, size=(5, 4, n)) / 255.0
        p = tmp_path / f"b.{ext}"
        io.write_image(str(p), img)
        ok &= bool(np.array_equal(io.read_image(str(p)), img))
    # verify exits 0 on a correct build
    ok &= cli_main(["verify", "--seed", "0"]) == 0
    # mutation smoke test: sabotage one formula, verify must exit 1
    from lgtv import densities as _dens

    monkeypatch.setattr(
        _dens.PhiMu, "deriv2", lambda self, t: np.asarray(t, dtype=float) * 0.0 + 0.5
    )
    ok &= cli_main(["verify", "--seed", "0"]) == 1
    monkeypatch.undo()
    capsys.readouterr()
    _report(10, "I/O round trips and verify mutation smoke test", ok)
