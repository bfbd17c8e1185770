"""Parsers for the solver's artifact formats.

These formats are the contract between the solver package and this one:

* field snapshot CSV: header ``i,j,x,y,rho,u,v,p,mach``, one row per cell;
* contour sidecar JSON: ``{"variable", "min", "max", "levels"}`` where the
  levels are inclusive of both ends;
* residual history CSV: header ``iteration,time,density_residual_l2``;
* phase trace CSV: header ``step,rho_hat,rhou_hat,p_hat,V,delta_V`` with a
  ``<name>.meta.json`` sidecar carrying the scheme family and base state.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

FIELD_HEADER = "i,j,x,y,rho,u,v,p,mach"
FIELD_COLUMNS = ("x", "y", "rho", "u", "v", "p", "mach")
RESIDUAL_HEADER = "iteration,time,density_residual_l2"
TRACE_HEADER = "step,rho_hat,rhou_hat,p_hat,V,delta_V"


@dataclass
class FieldSnapshot:
    ni: int
    nj: int
    data: dict  # column name -> (ni, nj) array

    def __getitem__(self, name):
        return self.data[name]


@dataclass
class ContourLevels:
    variable: str
    vmin: float
    vmax: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.vmin, self.vmax, self.count)


@dataclass
class Trace:
    steps: np.ndarray
    rho_hat: np.ndarray
    rhou_hat: np.ndarray
    p_hat: np.ndarray
    v: np.ndarray
    delta_v: np.ndarray
    meta: dict


def read_field(path) -> FieldSnapshot:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != FIELD_HEADER:
            raise ValueError(f"{path}: unexpected field header {header!r}")
        raw = np.loadtxt(fh, delimiter=",", ndmin=2)
    if raw.size == 0:
        raise ValueError(f"{path}: empty field snapshot")
    ni = int(raw[:, 0].max()) + 1
    nj = int(raw[:, 1].max()) + 1
    if raw.shape[0] != ni * nj:
        raise ValueError(f"{path}: expected {ni * nj} rows, found {raw.shape[0]}")
    ii = raw[:, 0].astype(int)
    jj = raw[:, 1].astype(int)
    data = {}
    for k, name in enumerate(FIELD_COLUMNS):
        arr = np.empty((ni, nj))
        arr[ii, jj] = raw[:, k + 2]
        data[name] = arr
    return FieldSnapshot(ni, nj, data)


def sidecar_path_for(field_path) -> str:
    base, _ = os.path.splitext(str(field_path))
    return base + ".contours.json"


def read_contour_sidecar(path) -> ContourLevels:
    if not os.path.exists(path):
        raise FileNotFoundError(
            f"contour sidecar {path} is missing; levels are never guessed"
        )
    with open(path, "r", encoding="ascii") as fh:
        spec = json.load(fh)
    for key in ("variable", "min", "max", "levels"):
        if key not in spec:
            raise ValueError(f"{path}: sidecar lacks '{key}'")
    return ContourLevels(spec["variable"], float(spec["min"]), float(spec["max"]), int(spec["levels"]))


def _load_rows(fh, path, what):
    body = fh.read().strip()
    if not body:
        raise ValueError(f"{path}: {what} is empty")
    return np.loadtxt(body.splitlines(), delimiter=",", ndmin=2)


def read_residual_history(path):
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != RESIDUAL_HEADER:
            raise ValueError(f"{path}: unexpected residual header {header!r}")
        raw = _load_rows(fh, path, "residual history")
    return raw[:, 0].astype(int), raw[:, 1], raw[:, 2]


def read_trace(path) -> Trace:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != TRACE_HEADER:
            raise ValueError(f"{path}: unexpected trace header {header!r}")
        raw = _load_rows(fh, path, "trace")
    meta_path = str(path) + ".meta.json"
    meta = {}
    if os.path.exists(meta_path):
        with open(meta_path, "r", encoding="ascii") as fh:
            meta = json.load(fh)
    return Trace(raw[:, 0].astype(int), raw[:, 1], raw[:, 2], raw[:, 3], raw[:, 4], raw[:, 5], meta)


def base_states_match(a: Trace, b: Trace) -> bool:
    keys = ("rho0", "u0", "p0", "gamma", "nu")
    if not a.meta or not b.meta:
        return False
    return all(a.meta.get(k) == b.meta.get(k) for k in keys)
