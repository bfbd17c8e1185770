"""Command-line driver.

Subcommands::

    shocklab run <config>                        # one case, one scheme
    shocklab analyze <family> [flags]            # stability-lab reports
    shocklab sweep <config> --schemes a,b,c      # same case, several schemes

``SHOCKLAB_OUT_ROOT`` (environment) prefixes all relative output paths.

Exit status: 0 clean, 2 configuration error, 3 solver abort on a
non-physical state (a diagnostic snapshot of the raw conserved field is
dumped in that case).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import artifacts
from .cases import (
    CaseDefinition,
    build_blunt_body,
    build_double_mach,
    build_forward_step,
    build_planar_shock,
    build_supersonic_corner,
    instability_metrics,
)
from .config import RunConfig, parse_config
from .errors import ConfigError, NonPhysicalState, UnsupportedFamily
from .solver import Solver
from .stability import (
    MATRIX_FAMILIES,
    BaseState,
    PerturbationState,
    SchemeFamily,
    phase_portrait,
    primitive_amplification_matrix,
    reduced_lyapunov_verdict,
    stability_region_map,
)

_PRESET_BUILDERS = {
    "planar_shock": (build_planar_shock, {}),
    "planar_shock_desk": (build_planar_shock, {"ni": 400}),
    "double_mach": (build_double_mach, {}),
    "double_mach_short": (build_double_mach, {"end_time": 0.020026}),
    "forward_step": (build_forward_step, {}),
    "forward_step_coarse": (build_forward_step, {"ni": 120, "nj": 40}),
    "blunt_body": (build_blunt_body, {}),
    "blunt_body_desk": (build_blunt_body, {"n_circ": 160, "n_rad": 20, "max_iters": 20000}),
    "supersonic_corner": (build_supersonic_corner, {}),
}


def _build_case(cfg: RunConfig) -> CaseDefinition:
    builder, kwargs = _PRESET_BUILDERS[cfg.case]
    kwargs = dict(kwargs)
    if builder is build_blunt_body:
        if cfg.ni is not None:
            kwargs["n_circ"] = cfg.ni
        if cfg.nj is not None:
            kwargs["n_rad"] = cfg.nj
        if cfg.max_iters is not None:
            kwargs["max_iters"] = cfg.max_iters
    elif builder is build_supersonic_corner:
        if cfg.ni is not None:
            kwargs["n"] = cfg.ni
    else:
        if cfg.ni is not None:
            kwargs["ni"] = cfg.ni
        if cfg.nj is not None:
            kwargs["nj"] = cfg.nj
    case = builder(**kwargs)
    if cfg.end_time is not None:
        case.end_time = cfg.end_time
        if cfg.max_iters is None and builder is not build_blunt_body:
            case.max_iters = None
    if cfg.max_iters is not None:
        case.max_iters = cfg.max_iters
    if cfg.cfl is not None:
        case.cfl = cfg.cfl
    return case


def _out_dir(path: str) -> str:
    root = os.environ.get("SHOCKLAB_OUT_ROOT")
    if root and not os.path.isabs(path):
        path = os.path.join(root, path)
    os.makedirs(path, exist_ok=True)
    return path


def _write_raw_field_csv(grid, U, path) -> None:
    # diagnostic dump that works even when the EOS cannot be evaluated
    lines = ["i,j,x,y,rho,rho_u,rho_v,rho_E"]
    xc, yc = grid.centers[:, :, 0], grid.centers[:, :, 1]
    for j in range(grid.nj):
        for i in range(grid.ni):
            vals = (xc[i, j], yc[i, j], U[0, i, j], U[1, i, j], U[2, i, j], U[3, i, j])
            lines.append(f"{i},{j}," + ",".join(format(v, ".17g") for v in vals))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


class _SnapshotWriter:
    def __init__(self, cfg: RunConfig, case: CaseDefinition, out: str):
        self.cfg = cfg
        self.case = case
        self.out = out
        self.paths: list[str] = []
        self._next_time = cfg.snapshot_every_time

    def _emit(self, solver, tag: str) -> None:
        base = os.path.join(self.out, f"field_{tag}")
        if "csv" in self.cfg.formats:
            artifacts.write_field_csv(solver.grid, solver.U, solver.gas, base + ".csv")
            self.paths.append(base + ".csv")
        if "vtk" in self.cfg.formats:
            artifacts.write_field_vtk(solver.grid, solver.U, solver.gas, base + ".vtk")
            self.paths.append(base + ".vtk")
        if self.case.contours is not None:
            artifacts.write_contour_sidecar(self.case.contours, base + ".contours.json")
            self.paths.append(base + ".contours.json")

    def on_step(self, solver) -> None:
        due = False
        every = self.cfg.snapshot_every_iters
        if every is not None and solver.iteration % every == 0:
            due = True
        if self._next_time is not None and solver.t >= self._next_time * (1.0 - 1e-12):
            due = True
            while solver.t >= self._next_time * (1.0 - 1e-12):
                self._next_time += self.cfg.snapshot_every_time
        if due:
            self._emit(solver, f"{solver.iteration:07d}")

    def final(self, solver) -> None:
        self._emit(solver, "final")


def run_config(cfg: RunConfig) -> int:
    """Drive one case to its end condition and write all artifacts."""
    case = _build_case(cfg)
    out = _out_dir(cfg.out_dir)
    solver = Solver(
        case.grid, case.initial, case.boundaries, case.gas,
        cfg.flux_scheme(), cfg.order, case.cfl, case.end_time, case.max_iters,
    )
    snaps = _SnapshotWriter(cfg, case, out)
    try:
        solver.run(snaps.on_step)
    except NonPhysicalState as err:
        diag = os.path.join(out, "field_diagnostic.csv")
        _write_raw_field_csv(solver.grid, solver.U, diag)
        snaps.paths.append(diag)
        artifacts.write_manifest(out, snaps.paths)
        print(f"shocklab: aborted on non-physical state: {err}", file=sys.stderr)
        return 3

    snaps.final(solver)
    hist_path = os.path.join(out, "residual_history.csv")
    artifacts.write_residual_history_csv(solver.history, hist_path)
    snaps.paths.append(hist_path)

    metrics = instability_metrics(cfg.case, solver.U)
    rows = [(cfg.case, solver.iteration, solver.t, k, v) for k, v in sorted(metrics.items())]
    metrics_path = os.path.join(out, "instability_metrics.csv")
    artifacts.write_metrics_csv(rows, metrics_path)
    snaps.paths.append(metrics_path)

    artifacts.write_manifest(out, snaps.paths)
    summary = ", ".join(f"{k}={v:.6g}" for k, v in sorted(metrics.items()))
    print(
        f"shocklab: {cfg.case} [{cfg.scheme}] finished after {solver.iteration} "
        f"iterations (t={solver.t:.6g}); {summary}"
    )
    return 0


def cmd_run(args) -> int:
    try:
        cfg = parse_config(_read(args.config))
    except ConfigError as err:
        print(f"shocklab: configuration error: {err}", file=sys.stderr)
        return 2
    return run_config(cfg)


def cmd_sweep(args) -> int:
    try:
        cfg = parse_config(_read(args.config))
    except ConfigError as err:
        print(f"shocklab: configuration error: {err}", file=sys.stderr)
        return 2
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if not schemes:
        print("shocklab: --schemes must name at least one scheme", file=sys.stderr)
        return 2
    status = 0
    all_rows = []
    root = _out_dir(cfg.out_dir)
    for scheme in schemes:
        sub = replace(cfg, scheme=scheme, out_dir=os.path.join(cfg.out_dir, scheme))
        try:
            sub.flux_scheme()
        except ValueError as err:
            print(f"shocklab: bad scheme '{scheme}': {err}", file=sys.stderr)
            return 2
        code = run_config(sub)
        status = max(status, code)
        metrics_path = os.path.join(_out_dir(sub.out_dir), "instability_metrics.csv")
        if os.path.exists(metrics_path):
            with open(metrics_path) as fh:
                next(fh)
                for line in fh:
                    case, iteration, time, metric, value = line.strip().split(",")
                    all_rows.append((scheme, case, iteration, time, metric, value))
    lines = ["scheme,case,iteration,time,metric,value"]
    lines += [",".join(r) for r in all_rows]
    with open(os.path.join(root, "sweep_metrics.csv"), "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return status


def cmd_analyze(args) -> int:
    try:
        family = SchemeFamily(args.family)
    except ValueError:
        names = ", ".join(f.value for f in SchemeFamily)
        print(f"shocklab: unknown family '{args.family}' (choose from {names})", file=sys.stderr)
        return 2
    try:
        base = BaseState(rho0=args.rho0, u0=args.u0, p0=args.p0, gamma=args.gamma, nu=args.nu)
    except ValueError as err:
        print(f"shocklab: bad base state: {err}", file=sys.stderr)
        return 2
    out = _out_dir(args.out_dir)
    paths = []

    if family in MATRIX_FAMILIES:
        nus = sorted({0.1, 0.25, 0.45, 0.49, args.nu})
        lines = ["family,nu,lambda1,lambda2,lambda3"]
        for nu in nus:
            lams = np.sort(np.linalg.eigvals(primitive_amplification_matrix(family, nu, args.gamma)).real)
            lines.append(f"{family.value},{nu:.17g}," + ",".join(f"{x:.17g}" for x in lams))
        eig_path = os.path.join(out, "eigenvalues.csv")
        with open(eig_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        paths.append(eig_path)
        verdict = reduced_lyapunov_verdict(family, args.nu, args.gamma)
    else:
        verdict = "NotApplicable (nonlinear scheme family: no constant amplification matrix)"
    verdict_path = os.path.join(out, "verdict.txt")
    with open(verdict_path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(verdict + "\n")
    paths.append(verdict_path)

    try:
        x0 = PerturbationState(args.rho_hat, args.rhou_hat if args.rhou_hat is not None else args.rho_hat * base.u0, args.p_hat)
        trace = phase_portrait(family, x0, base, args.steps)
        trace_path = os.path.join(out, "trace.csv")
        artifacts.write_trace_csv(trace, trace_path)
        paths += [trace_path, trace_path + ".meta.json"]

        axis = np.array([-1e-2, -1e-3, 0.0, 1e-3, 1e-2])
        samples = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
        region = stability_region_map(family, base, samples)
        map_path = os.path.join(out, "delta_v_signs.csv")
        artifacts.write_region_map_csv(region, map_path)
        paths.append(map_path)
        first_dv = trace.points[0].delta_v
        extra = f"first-step dV = {first_dv:.6g}"
    except UnsupportedFamily:
        extra = "no perturbation recurrence for this family"

    artifacts.write_manifest(out, paths)
    print(f"shocklab: analyze {family.value}: verdict = {verdict}; {extra}")
    return 0


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="shocklab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one case from a config file")
    p_run.add_argument("config")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run one case under several schemes")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--schemes", required=True, help="comma-separated scheme names")
    p_sweep.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="stability-lab reports for a scheme family")
    p_an.add_argument("family")
    p_an.add_argument("--nu", type=float, default=0.45)
    p_an.add_argument("--rho0", type=float, default=1.0)
    p_an.add_argument("--u0", type=float, default=1.0)
    p_an.add_argument("--p0", type=float, default=1.0)
    p_an.add_argument("--gamma", type=float, default=1.4)
    p_an.add_argument("--rho-hat", dest="rho_hat", type=float, default=-0.1)
    p_an.add_argument("--rhou-hat", dest="rhou_hat", type=float, default=None,
                      help="defaults to rho_hat * u0")
    p_an.add_argument("--p-hat", dest="p_hat", type=float, default=0.1)
    p_an.add_argument("--steps", type=int, default=40)
    p_an.add_argument("--out-dir", dest="out_dir", default="analysis")
    p_an.set_defaults(func=cmd_analyze)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
