"""All file emission: field snapshots (CSV and legacy VTK), contour sidecars,
residual histories, instability metrics, stability-lab reports, and run
manifests.

Numbers are written with 17 significant digits so that re-reading a file
reproduces the binary float64 values exactly; no file contains timestamps,
which keeps repeated runs byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from .cases import ContourSpec
from .euler import GasModel, primitive_field
from .grid import StructuredGrid
from .solver import ResidualHistory
from .stability import LyapunovTrace, RegionMap


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_field_csv(grid: StructuredGrid, U: np.ndarray, gas: GasModel, path) -> None:
    """One row per cell, row-major (j outer, i inner), with cell centers and
    primitive variables plus the local Mach number."""
    W = primitive_field(U, gas)
    a = np.sqrt(gas.gamma * W[3] / W[0])
    mach = np.sqrt(W[1] ** 2 + W[2] ** 2) / a
    xc = grid.centers[:, :, 0]
    yc = grid.centers[:, :, 1]
    lines = ["i,j,x,y,rho,u,v,p,mach"]
    for j in range(grid.nj):
        for i in range(grid.ni):
            vals = (xc[i, j], yc[i, j], W[0, i, j], W[1, i, j], W[2, i, j], W[3, i, j], mach[i, j])
            lines.append(f"{i},{j}," + ",".join(_fmt(v) for v in vals))
    _write_text(path, "\n".join(lines) + "\n")


def read_field_csv(path):
    """Parse a field snapshot back into (grid shape, centers, primitive field).

    Returns (ni, nj, x, y, W, mach) with arrays shaped (ni, nj).
    """
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "i,j,x,y,rho,u,v,p,mach":
            raise ValueError(f"unexpected field CSV header: {header!r}")
        data = np.loadtxt(fh, delimiter=",")
    data = np.atleast_2d(data)
    ni = int(data[:, 0].max()) + 1
    nj = int(data[:, 1].max()) + 1
    full = np.empty((ni, nj, 7))
    ii = data[:, 0].astype(int)
    jj = data[:, 1].astype(int)
    full[ii, jj, :] = data[:, 2:]
    x, y = full[:, :, 0], full[:, :, 1]
    W = np.stack([full[:, :, 2], full[:, :, 3], full[:, :, 4], full[:, :, 5]])
    return ni, nj, x, y, W, full[:, :, 6]


def write_field_vtk(grid: StructuredGrid, U: np.ndarray, gas: GasModel, path) -> None:
    """Legacy-text VTK structured grid with cell-data scalars rho, p, mach
    and the velocity vector."""
    W = primitive_field(U, gas)
    a = np.sqrt(gas.gamma * W[3] / W[0])
    mach = np.sqrt(W[1] ** 2 + W[2] ** 2) / a
    npts = (grid.ni + 1) * (grid.nj + 1)
    out = [
        "# vtk DataFile Version 3.0",
        "shocklab field snapshot",
        "ASCII",
        "DATASET STRUCTURED_GRID",
        f"DIMENSIONS {grid.ni + 1} {grid.nj + 1} 1",
        f"POINTS {npts} double",
    ]
    verts = grid.vertices
    for j in range(grid.nj + 1):
        for i in range(grid.ni + 1):
            out.append(f"{_fmt(verts[i, j, 0])} {_fmt(verts[i, j, 1])} 0")
    out.append(f"CELL_DATA {grid.ni * grid.nj}")
    for name, arr in (("rho", W[0]), ("p", W[3]), ("mach", mach)):
        out.append(f"SCALARS {name} double")
        out.append("LOOKUP_TABLE default")
        for j in range(grid.nj):
            for i in range(grid.ni):
                out.append(_fmt(arr[i, j]))
    out.append("VECTORS velocity double")
    for j in range(grid.nj):
        for i in range(grid.ni):
            out.append(f"{_fmt(W[1, i, j])} {_fmt(W[2, i, j])} 0")
    _write_text(path, "\n".join(out) + "\n")


def write_contour_sidecar(spec: ContourSpec, path) -> None:
    """Contour-level metadata for a snapshot, so plotting tools need no
    built-in knowledge of per-case level conventions."""
    payload = {
        "variable": spec.variable,
        "min": spec.vmin,
        "max": spec.vmax,
        "levels": spec.levels,
    }
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_residual_history_csv(history: ResidualHistory, path) -> None:
    lines = ["iteration,time,density_residual_l2"]
    for it, t, r in zip(history.iterations, history.times, history.values):
        lines.append(f"{it},{_fmt(t)},{_fmt(r)}")
    _write_text(path, "\n".join(lines) + "\n")


def read_residual_history_csv(path) -> ResidualHistory:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "iteration,time,density_residual_l2":
            raise ValueError(f"unexpected residual CSV header: {header!r}")
        data = np.atleast_2d(np.loadtxt(fh, delimiter=","))
    hist = ResidualHistory()
    if data.size:
        for row in data:
            hist.append(int(row[0]), float(row[1]), float(row[2]))
    return hist


def write_metrics_csv(rows, path) -> None:
    """Rows are (case, iteration, time, metric, value) tuples."""
    lines = ["case,iteration,time,metric,value"]
    for case, iteration, time, metric, value in rows:
        lines.append(f"{case},{iteration},{_fmt(time)},{metric},{_fmt(value)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_trace_csv(trace: LyapunovTrace, path, meta_path=None) -> None:
    """Phase-portrait trace plus a JSON sidecar carrying the family and the
    base state (plot tools use the sidecar to refuse mixing traces from
    different base states)."""
    lines = ["step,rho_hat,rhou_hat,p_hat,V,delta_V"]
    for pt in trace.points:
        s = pt.state
        lines.append(
            f"{pt.step},{_fmt(s.rho_hat)},{_fmt(s.rhou_hat)},{_fmt(s.p_hat)},"
            f"{_fmt(pt.v)},{_fmt(pt.delta_v)}"
        )
    _write_text(path, "\n".join(lines) + "\n")
    if meta_path is None:
        meta_path = str(path) + ".meta.json"
    base = trace.base
    meta = {
        "family": trace.family.value,
        "rho0": base.rho0,
        "u0": base.u0,
        "p0": base.p0,
        "gamma": base.gamma,
        "nu": base.nu,
        "steps": len(trace.points) - 1,
    }
    _write_text(meta_path, json.dumps(meta, indent=2, sort_keys=True) + "\n")


def write_region_map_csv(region: RegionMap, path) -> None:
    lines = ["rho_hat,rhou_hat,p_hat,delta_V,sign"]
    for row, dv, sg in zip(region.samples, region.delta_v, region.sign):
        lines.append(f"{_fmt(row[0])},{_fmt(row[1])},{_fmt(row[2])},{_fmt(dv)},{int(sg)}")
    _write_text(path, "\n".join(lines) + "\n")


def write_manifest(directory, paths) -> str:
    """manifest.json mapping each artifact (relative path) to its sha256."""
    entries = {}
    for p in paths:
        rel = os.path.relpath(p, directory)
        with open(p, "rb") as fh:
            entries[rel] = hashlib.sha256(fh.read()).hexdigest()
    manifest = os.path.join(directory, "manifest.json")
    _write_text(manifest, json.dumps(entries, indent=2, sort_keys=True) + "\n")
    return manifest


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as err:
        raise OSError(f"cannot write artifact {path}: {err}") from err
