"""Command-line interface.

Subcommands:

* ``denoise``     minimize a smooth model and write the result plus a JSON
                  solver report
* ``compare-tv``  sweep mu or eps and tabulate distances to the certified
                  TV solution as CSV
* ``verify``      run the property suite; exit 0 iff every check passes
* ``hullcheck``   denoise and report the maximal distance of the result
                  from a convex set containing the data

An optional config file supplies ``key = value`` defaults (one per flag,
long names without dashes); explicit command-line flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import constraints, energy, grid, io, solve, tv, verify
from .estimators import make_density, _fidelity

__all__ = ["main"]

USAGE_ERROR = 2


def _read_config(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected 'key = value'")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "").replace("_", "")] = val.strip()
    return values


def _apply_config(parser, args, argv):
    if not getattr(args, "config", None):
        return args
    values = _read_config(args.config)
    explicit = set()
    for tok in argv:
        if tok.startswith("--"):
            explicit.add(tok[2:].split("=", 1)[0].replace("-", "").replace("_", ""))
    for action in parser._actions:
        dest = action.dest
        key = dest.replace("_", "")
        if key in values and key not in explicit:
            setattr(args, dest, action.type(values[key]) if action.type else values[key])
    return args


def _build_model(args):
    dens = make_density(args.density, mu=args.mu, eps=args.eps)
    fid = _fidelity(args.fidelity)
    if args.model == "iso":
        return energy.EnergyModel(density=dens, lam=args.lam, delta=args.delta, fidelity=fid)
    if args.model == "aniso":
        return energy.EnergyModel(
            density=dens, family="anisotropic", lam=args.lam, delta=args.delta,
            fidelity=fid, smoothing_eps=args.smoothing_eps,
        )
    if args.model == "blend":
        if not args.blend_mask:
            raise SystemExit("blend model needs --blend-mask")
        mask = io.read_image(args.blend_mask)
        dens2 = make_density(args.density, mu=args.mu2, eps=args.eps)
        return energy.EnergyModel(
            density=dens, family="blend", density2=dens2, blend_mask=mask,
            lam=args.lam, delta=args.delta, fidelity=fid,
        )
    raise SystemExit(f"unknown model {args.model!r}")


def _solver_config(args, init="data"):
    sched = ()
    if getattr(args, "delta_schedule", None):
        sched = tuple(float(x) for x in args.delta_schedule.split(","))
    return solve.SolverConfig(
        grad_tol=args.grad_tol, max_iters=args.max_iters,
        init=init, delta_schedule=sched,
    )


def _add_model_flags(p):
    p.add_argument("--model", default="iso", choices=["iso", "aniso", "blend"])
    p.add_argument("--density", default="phimu", choices=["phimu", "scaled_phimu", "phuber"])
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--mu2", type=float, default=50.0)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--smoothing-eps", type=float, default=1e-3)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--delta-schedule", default="")
    p.add_argument("--fidelity", default="quad")
    p.add_argument("--blend-mask", default="")
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=20000)


def _parse_set(spec):
    kind, _, rest = spec.partition(":")
    vals = [float(x) for x in rest.split(",")] if rest else []
    if kind == "box":
        if len(vals) % 2 or not vals:
            raise SystemExit("box set needs lo...,hi... with equal lengths")
        half = len(vals) // 2
        return constraints.Box(lo=vals[:half], hi=vals[half:])
    if kind == "ball":
        if len(vals) < 2:
            raise SystemExit("ball set needs cx,...,r")
        return constraints.Ball(center=vals[:-1], radius=vals[-1])
    if kind == "psd":
        if len(vals) != 2:
            raise SystemExit("psd set needs m,alpha")
        return constraints.PsdCone(m=int(vals[0]), alpha=vals[1])
    raise SystemExit(f"unknown set kind {kind!r}")


def cmd_denoise(args):
    f = io.read_image(args.input)
    model = _build_model(args)
    u, report = solve.minimize(model, f, _solver_config(args))
    io.write_image(args.output, u)
    report_path = args.report or (args.output + ".json")
    with open(report_path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
    print(
        f"denoised {args.input} -> {args.output}: {report.iterations} iterations, "
        f"energy {report.final_energy:.6e}, grad {report.final_grad_norm:.2e} "
        f"({report.termination})"
    )
    return 0


def cmd_compare_tv(args):
    f = io.read_image(args.input)
    if bool(args.mu_list) == bool(args.eps_list):
        raise SystemExit("give exactly one of --mu-list or --eps-list")
    if args.mu_list:
        family = "mu"
        params = [float(x) for x in args.mu_list.split(",")]
    else:
        family = "eps"
        params = [float(x) for x in args.eps_list.split(",")]
    smoothing = args.smoothing_eps if args.model == "aniso" else None
    template = energy.EnergyModel(
        density=make_density("phimu", mu=4.0),
        family="anisotropic" if args.model == "aniso" else "isotropic",
        lam=args.lam, smoothing_eps=smoothing,
    )
    problem = tv.TvProblem(
        variant=args.variant, lam=args.lam,
        gap_tol=args.gap_tol, max_iters=args.tv_max_iters,
    )
    rows = tv.convergence_experiment(
        family, params, f, template, problem,
        config=_solver_config(args),
    )
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["param", "l1", "l2", "energy_smooth", "energy_tv"])
        for row in rows:
            writer.writerow(
                [row["param"], row["l1"], row["l2"], row["energy_smooth"], row["energy_tv"]]
            )
    finally:
        if args.output:
            out.close()
    return 0


def cmd_verify(args):
    results = verify.run_checks(seed=args.seed)
    sys.stdout.write(verify.format_table(results))
    return 0 if all(r.ok for r in results) else 1


def cmd_hullcheck(args):
    f = io.read_image(args.input)
    convex_set = _parse_set(args.set)
    if args.sanitize:
        flat = f.reshape(-1, f.shape[2])
        f = convex_set.project(flat).reshape(f.shape)
    model = _build_model(args)
    u, report = solve.minimize(model, f, _solver_config(args))
    violation = constraints.hull_violation(convex_set, u)
    data_violation = constraints.hull_violation(convex_set, f)
    print(f"data hull violation:   {data_violation:.6e}")
    print(f"result hull violation: {violation:.6e}")
    print(f"solver: {report.iterations} iterations, grad {report.final_grad_norm:.2e}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lgtv",
        description="Multi-channel denoising with convex linear-growth regularizers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="minimize a smooth model")
    p.add_argument("--config", default="")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--report", default="")
    _add_model_flags(p)
    p.set_defaults(fn=cmd_denoise)

    p = sub.add_parser("compare-tv", help="sweep mu or eps against the TV solution")
    p.add_argument("--config", default="")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="")
    p.add_argument("--variant", default="frobenius", choices=["frobenius", "nuclear"])
    p.add_argument("--model", default="iso", choices=["iso", "aniso"])
    p.add_argument("--mu-list", default="")
    p.add_argument("--eps-list", default="")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--gap-tol", type=float, default=1e-6)
    p.add_argument("--tv-max-iters", type=int, default=200000)
    p.add_argument("--smoothing-eps", type=float, default=1e-3)
    p.add_argument("--grad-tol", type=float, default=1e-7)
    p.add_argument("--max-iters", type=int, default=100000)
    p.add_argument("--delta-schedule", default="")
    p.set_defaults(fn=cmd_compare_tv)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("hullcheck", help="denoise and measure hull violation")
    p.add_argument("--config", default="")
    p.add_argument("--input", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--sanitize", action="store_true",
                   help="project the data onto the set before solving")
    _add_model_flags(p)
    p.set_defaults(fn=cmd_hullcheck)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    if getattr(args, "config", None):
        sub_parser = next(
            p for name, p in _subparsers(parser).items() if name == args.command
        )
        args = _apply_config(sub_parser, args, argv)
    try:
        return args.fn(args)
    except (io.FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


def _subparsers(parser):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    return {}


if __name__ == "__main__":
    raise SystemExit(main())
