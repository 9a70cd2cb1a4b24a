"""Command line entry points: ``simulate``, ``steady`` and ``verify``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import output
from .analysis import (
    continuous_dependence_experiment,
    energy_inequality_check,
    minimal_squeeze_rank,
)
from .config import RunConfig, load_config, parse_config
from .errors import MurrayCoatError, NoBracket, NonFinite
from .grid import build_spectral_operator, l2_norm
from .integrate import Scheme, SchemeConfig, random_ic, simulate
from .model import reaction_full, steady_state

__all__ = ["parse_config", "cmd_simulate", "cmd_steady", "cmd_verify", "run_checks", "main"]


def cmd_simulate(config_path, out_dir=None) -> int:
    try:
        cfg = load_config(config_path)
        grid, p = cfg.grid(), cfg.params()
        sop = build_spectral_operator(grid, p)
        traj = simulate(cfg.initial_state(), cfg.scheme_config(), grid, sop, p)
    except (OSError, MurrayCoatError) as exc:
        print(f"simulate: {exc}", file=sys.stderr)
        return 1

    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        output.write_diagnostics_csv(out / "diagnostics.csv", traj.diagnostics)
        for t, x in traj.snapshots:
            stem = f"u_{output.time_label(t)}"
            output.write_field_csv(out / f"{stem}.csv", x.u)
            output.write_pgm(out / f"{stem}.pgm", x.u)
            output.write_meta(out / f"{stem}.meta.txt", t, x.u, grid)
            if cfg.colormap == "heat":
                output.write_ppm(out / f"{stem}.ppm", x.u)
    except OSError as exc:
        print(f"simulate: cannot write output: {exc}", file=sys.stderr)
        return 1
    last = traj.diagnostics[-1]
    print(f"wrote {len(traj.snapshots)} snapshots to {out}; t={last.t:g} std_u={last.std_u:.6g}")
    return 0


def cmd_steady(config_path) -> int:
    try:
        p = load_config(config_path).params()
        us, vs = steady_state(p)
    except NoBracket as exc:
        print(f"steady: no positive equilibrium found: {exc}", file=sys.stderr)
        return 1
    except (OSError, MurrayCoatError) as exc:
        print(f"steady: {exc}", file=sys.stderr)
        return 1
    fu, fv = reaction_full(us, vs, p)
    print(f"u* = {us:.12g}")
    print(f"v* = {vs:.12g}")
    print(f"residual_u = {abs(fu):.3e}")
    print(f"residual_v = {abs(fv):.3e}")
    return 0


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    detail: str

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def _positivity_and_energy(cfg: RunConfig, grid, sop, p):
    if cfg.t_end == 0:
        skip = "t_end = 0"
        return [CheckResult("positivity", "skipped", skip), CheckResult("energy bound", "skipped", skip)]
    times = sorted(set(np.linspace(0.0, cfg.t_end, 151)[1:].tolist()) | set(cfg.snapshot_times))
    scfg = replace(cfg.scheme_config(), snapshot_times=tuple(times))
    lowest = [np.inf]

    def watch(step, t, x):
        lowest[0] = min(lowest[0], float(x.u.min()), float(x.v.min()))

    try:
        traj = simulate(cfg.initial_state(), scfg, grid, sop, p, observers=[watch])
    except NonFinite as exc:
        return [CheckResult("positivity", "fail", str(exc)),
                CheckResult("energy bound", "fail", "run did not complete")]
    neg = max(max(r.neg_energy_u, r.neg_energy_v) for r in traj.diagnostics)
    pos_ok = lowest[0] >= 0 and neg == 0
    results = [CheckResult("positivity", "pass" if pos_ok else "fail",
                           f"min over steps = {lowest[0]:.6g}, max negative-part energy = {neg:.3g}")]
    rep = energy_inequality_check(traj, p)
    results.append(CheckResult("energy bound", "pass" if rep.bounded else "fail",
                               f"gamma* = {rep.gamma_star:g}, C = {rep.c_hat:.6g}, "
                               f"sup E = {rep.sup_energy:.6g}"))
    return results


def _cross_scheme(cfg: RunConfig, grid, sop, p, horizon):
    x0 = cfg.initial_state()
    gaps = []
    try:
        for j in range(3):
            dt = cfg.dt / 2**j
            xs = [simulate(x0, SchemeConfig(s, dt, horizon), grid, sop, p).final
                  for s in (Scheme.IMEX, Scheme.ETD)]
            gaps.append(l2_norm(xs[0] - xs[1], grid))
    except NonFinite as exc:
        return CheckResult("cross-scheme gap", "fail", str(exc))
    ratios = [a / b if b > 0 else np.inf for a, b in zip(gaps, gaps[1:])]
    ok = all(1.5 <= r <= 2.5 for r in ratios)
    return CheckResult("cross-scheme gap", "pass" if ok else "fail",
                       "gaps = " + ", ".join(f"{g:.3e}" for g in gaps)
                       + "; ratios = " + ", ".join(f"{r:.3f}" for r in ratios))


def _dependence(cfg: RunConfig, grid, sop, p, horizon):
    direction = random_ic(grid, -1.0, 1.0, -1.0, 1.0, cfg.seed + 1)
    try:
        rep = continuous_dependence_experiment(cfg.initial_state(), direction, (1e-3, 5e-4, 2.5e-4),
                                               horizon, cfg.scheme_config(), grid, sop, p)
    except NonFinite as exc:
        return CheckResult("continuous dependence", "fail", str(exc))
    return CheckResult("continuous dependence", "pass" if rep.consistent else "fail",
                       "D/eps = " + ", ".join(f"{r:.6g}" for r in rep.ratios))


def _squeeze(cfg: RunConfig, grid, sop, p, horizon, n_pairs=10, amplitude=1e-3):
    x0 = cfg.initial_state()
    pairs = []
    for i in range(n_pairs):
        noise = random_ic(grid, -amplitude, amplitude, -amplitude, amplitude, cfg.seed + 100 + i)
        pairs.append((x0, x0 + noise))
    try:
        n_star, ranks, _ = minimal_squeeze_rank(pairs, horizon, cfg.scheme_config(), grid, sop, p)
    except NonFinite as exc:
        return CheckResult("squeezing", "fail", str(exc))
    limit = 0.4 * sop.n_modes
    return CheckResult("squeezing", "pass" if n_star <= limit else "fail",
                       f"N* = {n_star} of {sop.n_modes} modes (limit {limit:g})")


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    grid, p = cfg.grid(), cfg.params()
    sop = build_spectral_operator(grid, p)
    results = _positivity_and_energy(cfg, grid, sop, p)
    horizon = min(1.0, cfg.t_end)
    if horizon == 0:
        for name in ("cross-scheme gap", "continuous dependence", "squeezing"):
            results.append(CheckResult(name, "skipped", "t_end = 0"))
        return results
    results.append(_cross_scheme(cfg, grid, sop, p, horizon))
    results.append(_dependence(cfg, grid, sop, p, horizon))
    results.append(_squeeze(cfg, grid, sop, p, horizon))
    return results


def cmd_verify(config_path) -> int:
    try:
        results = run_checks(load_config(config_path))
    except (OSError, MurrayCoatError) as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{r.name:<{width}}  {r.status.upper():<7}  {r.detail}")
    ok = all(r.ok for r in results)
    print("all checks passed" if ok else "some checks FAILED")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="murraycoat", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a configuration and write snapshots")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out", default=None, help="output directory (default: out_dir from config)")

    p_st = sub.add_parser("steady", help="print the homogeneous equilibrium")
    p_st.add_argument("--config", required=True)

    p_ver = sub.add_parser("verify", help="run the numerical checks")
    p_ver.add_argument("--config", required=True)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.command == "simulate":
        return cmd_simulate(args.config, args.out)
    if args.command == "steady":
        return cmd_steady(args.config)
    return cmd_verify(args.config)


if __name__ == "__main__":
    sys.exit(main())
