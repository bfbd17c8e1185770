"""State vectors, perfect-gas equation of state, physical fluxes, and the
face-frame rotation machinery for the 2D compressible Euler equations.

All state containers accept either scalars or same-shaped numpy arrays in
their fields, so every operation here works elementwise on whole batches of
states (the solver exploits this for per-face vectorization).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPhysicalState

# Fields of the state containers: python floats or ndarrays of a common shape.
Scalar = "float | np.ndarray"


@dataclass(frozen=True)
class GasModel:
    """Calorically perfect gas with specific-heat ratio gamma > 1."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


@dataclass
class PrimitiveState:
    """Primitive variables (rho, u, v, p).

    In the face frame, ``u`` is the face-normal velocity and ``v`` the
    tangential one; in the global frame they are the x and y components.
    """

    rho: float | np.ndarray
    u: float | np.ndarray
    v: float | np.ndarray
    p: float | np.ndarray

    def sound_speed(self, gas: GasModel):
        return np.sqrt(gas.gamma * self.p / self.rho)

    def mach(self, gas: GasModel):
        return np.sqrt(self.u * self.u + self.v * self.v) / self.sound_speed(gas)

    def validate(self, gas: GasModel) -> None:
        if not (np.all(self.rho > 0.0) and np.all(self.p > 0.0)):
            raise NonPhysicalState("non-positive density or pressure in primitive state")


@dataclass
class ConservedState:
    """Cell-averaged conserved variables (rho, rho*u, rho*v, rho*E)."""

    rho: float | np.ndarray
    rho_u: float | np.ndarray
    rho_v: float | np.ndarray
    rho_E: float | np.ndarray

    def as_array(self) -> np.ndarray:
        """Stack the components along a leading axis of length 4."""
        return np.stack(np.broadcast_arrays(self.rho, self.rho_u, self.rho_v, self.rho_E))

    @classmethod
    def from_array(cls, a) -> "ConservedState":
        return cls(a[0], a[1], a[2], a[3])


@dataclass(frozen=True)
class FaceFrame:
    """Unit outward normal (nx, ny) and length of a cell interface."""

    nx: float | np.ndarray
    ny: float | np.ndarray
    length: float | np.ndarray = 1.0

    def __post_init__(self):
        norm_err = np.abs(self.nx * self.nx + self.ny * self.ny - 1.0)
        if not np.all(norm_err <= 1e-12):
            raise ValueError("face normal is not a unit vector")
        if not np.all(np.asarray(self.length) > 0.0):
            raise ValueError("face length must be positive")


def conserved_from_primitive(w: PrimitiveState, gas: GasModel) -> ConservedState:
    """Equation-of-state closure: rho*E = p/(gamma-1) + rho*(u^2+v^2)/2."""
    rho_E = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v)
    return ConservedState(w.rho, w.rho * w.u, w.rho * w.v, rho_E)


def primitive_from_conserved(U: ConservedState, gas: GasModel) -> PrimitiveState:
    """Invert the equation of state; raises NonPhysicalState on rho<=0 or p<=0."""
    rho = U.rho
    if not np.all(rho > 0.0):
        raise NonPhysicalState("non-positive density", where=_bad_indices(rho <= 0.0))
    u = U.rho_u / rho
    v = U.rho_v / rho
    p = (gas.gamma - 1.0) * (U.rho_E - 0.5 * rho * (u * u + v * v))
    if not np.all(p > 0.0):
        raise NonPhysicalState("non-positive pressure", where=_bad_indices(p <= 0.0))
    return PrimitiveState(rho, u, v, p)


def _bad_indices(mask):
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return tuple(map(tuple, np.argwhere(mask)))


def physical_flux_x(w: PrimitiveState, gas: GasModel) -> np.ndarray:
    """x-directional Euler flux [rho*u, rho*u^2+p, rho*u*v, (rho*E+p)*u]."""
    rho_E = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v)
    m = w.rho * w.u
    return np.stack(
        np.broadcast_arrays(m, m * w.u + w.p, m * w.v, (rho_E + w.p) * w.u)
    )


def rotate_to_face(U: ConservedState, frame: FaceFrame) -> ConservedState:
    """Rotate momenta into (normal, tangential) components of the face frame."""
    return ConservedState(
        U.rho,
        frame.nx * U.rho_u + frame.ny * U.rho_v,
        -frame.ny * U.rho_u + frame.nx * U.rho_v,
        U.rho_E,
    )


def rotate_from_face(U: ConservedState, frame: FaceFrame) -> ConservedState:
    """Inverse rotation, back to global (x, y) momentum components."""
    return ConservedState(
        U.rho,
        frame.nx * U.rho_u - frame.ny * U.rho_v,
        frame.ny * U.rho_u + frame.nx * U.rho_v,
        U.rho_E,
    )


def conserved_field(W: np.ndarray, gas: GasModel) -> np.ndarray:
    """Field-array form of :func:`conserved_from_primitive`; ``W`` has shape
    (4, ...) with rows rho, u, v, p."""
    return conserved_from_primitive(PrimitiveState(W[0], W[1], W[2], W[3]), gas).as_array()


def primitive_field(U: np.ndarray, gas: GasModel) -> np.ndarray:
    """Field-array form of :func:`primitive_from_conserved`; raises
    NonPhysicalState carrying the offending cell indices."""
    w = primitive_from_conserved(ConservedState.from_array(U), gas)
    return np.stack(np.broadcast_arrays(w.rho, w.u, w.v, w.p))
