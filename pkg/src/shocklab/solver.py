"""Finite-volume engine on structured quadrilateral grids.

Every face flux is evaluated in its local face frame (rotate states in,
evaluate the 1D flux, rotate the momentum flux back), so a single flux
routine serves arbitrary face orientations.  Faces between active and
blanked cells are solid walls: the missing side is replaced by the mirror
image of the interior state.

The update loops are fully vectorized over faces and cells; reductions
(residual norms, time-step minima) use numpy's fixed index ordering, which
makes runs bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Optional, Union

import numpy as np

from .errors import NonPhysicalState
from .euler import GasModel, PrimitiveState, primitive_field
from .grid import StructuredGrid
from .riemann import FluxScheme, hllem_family_flux

# ---------------------------------------------------------------------------
# boundary conditions


@dataclass(frozen=True)
class SupersonicInflow:
    """Dirichlet ghost state (primitive)."""

    state: PrimitiveState


@dataclass(frozen=True)
class ZeroGradientOutflow:
    pass


@dataclass(frozen=True)
class ReflectiveWall:
    pass


@dataclass(frozen=True)
class Extrapolate:
    """Zeroth-order extrapolation of the interior state."""


@dataclass(frozen=True)
class MovingShockTop:
    """Time-dependent top boundary tracking a straight shock front: ghost
    columns with center x < x0 + speed_x * t get the post-shock state, the
    rest the pre-shock state."""

    pre: PrimitiveState
    post: PrimitiveState
    x0: float
    speed_x: float


@dataclass(frozen=True)
class SplitAtX:
    """Apply ``left`` to boundary faces with center x below ``x_split`` and
    ``right`` elsewhere (used for mixed-condition edges)."""

    x_split: float
    left: "BoundaryCondition"
    right: "BoundaryCondition"


BoundaryCondition = Union[
    SupersonicInflow, ZeroGradientOutflow, ReflectiveWall, Extrapolate, MovingShockTop, SplitAtX
]


@dataclass(frozen=True)
class BoundarySpec:
    """One condition per domain edge; edges are named in index space
    (left/right are i=0/i=ni, bottom/top are j=0/j=nj)."""

    left: BoundaryCondition
    right: BoundaryCondition
    bottom: BoundaryCondition
    top: BoundaryCondition


def _mirror_rows(w, nx, ny):
    """Mirror velocity about a face with unit normal (nx, ny); w is (4, n)."""
    un = w[1] * nx + w[2] * ny
    return np.stack([w[0], w[1] - 2.0 * un * nx, w[2] - 2.0 * un * ny, w[3]])


def _edge_ghosts(cond, w0, w1, nx, ny, xs, t):
    """Ghost layers (adjacent, outer) for one edge.

    w0/w1 are the first/second interior layers as (4, n) arrays, (nx, ny) the
    boundary face normals, xs the boundary-cell center x coordinates.
    """
    if isinstance(cond, SupersonicInflow):
        s = cond.state
        g = np.broadcast_to(
            np.array([s.rho, s.u, s.v, s.p], dtype=float)[:, None], w0.shape
        ).copy()
        return g, g.copy()
    if isinstance(cond, (ZeroGradientOutflow, Extrapolate)):
        return w0.copy(), w0.copy()
    if isinstance(cond, ReflectiveWall):
        return _mirror_rows(w0, nx, ny), _mirror_rows(w1, nx, ny)
    if isinstance(cond, MovingShockTop):
        xs_now = cond.x0 + cond.speed_x * t
        post = np.array([cond.post.rho, cond.post.u, cond.post.v, cond.post.p], dtype=float)
        pre = np.array([cond.pre.rho, cond.pre.u, cond.pre.v, cond.pre.p], dtype=float)
        g = np.where(xs[None, :] < xs_now, post[:, None], pre[:, None])
        return g, g.copy()
    if isinstance(cond, SplitAtX):
        gl1, gl0 = _edge_ghosts(cond.left, w0, w1, nx, ny, xs, t)
        gr1, gr0 = _edge_ghosts(cond.right, w0, w1, nx, ny, xs, t)
        mask = xs[None, :] < cond.x_split
        return np.where(mask, gl1, gr1), np.where(mask, gl0, gr0)
    raise TypeError(f"unknown boundary condition {cond!r}")


def apply_boundaries(grid: StructuredGrid, W: np.ndarray, spec: BoundarySpec, t: float = 0.0) -> np.ndarray:
    """Embed the primitive field in a 2-deep ghost halo filled per the
    boundary spec; returns an array of shape (4, ni+4, nj+4)."""
    ni, nj = grid.ni, grid.nj
    Wp = np.empty((4, ni + 4, nj + 4))
    Wp[:, 2:-2, 2:-2] = W
    i1 = min(1, ni - 1)  # second interior layer clamps on single-cell strips
    j1 = min(1, nj - 1)

    # left / right edges (ghost columns), interior j range only
    g1, g0 = _edge_ghosts(
        spec.left, W[:, 0, :], W[:, i1, :],
        grid.iface_nx[0, :], grid.iface_ny[0, :], grid.centers[0, :, 0], t,
    )
    Wp[:, 1, 2:-2] = g1
    Wp[:, 0, 2:-2] = g0
    g1, g0 = _edge_ghosts(
        spec.right, W[:, -1, :], W[:, -1 - i1, :],
        grid.iface_nx[ni, :], grid.iface_ny[ni, :], grid.centers[-1, :, 0], t,
    )
    Wp[:, -2, 2:-2] = g1
    Wp[:, -1, 2:-2] = g0

    # bottom / top edges (ghost rows)
    g1, g0 = _edge_ghosts(
        spec.bottom, W[:, :, 0], W[:, :, j1],
        grid.jface_nx[:, 0], grid.jface_ny[:, 0], grid.centers[:, 0, 0], t,
    )
    Wp[:, 2:-2, 1] = g1
    Wp[:, 2:-2, 0] = g0
    g1, g0 = _edge_ghosts(
        spec.top, W[:, :, -1], W[:, :, -1 - j1],
        grid.jface_nx[:, nj], grid.jface_ny[:, nj], grid.centers[:, -1, 0], t,
    )
    Wp[:, 2:-2, -2] = g1
    Wp[:, 2:-2, -1] = g0

    # corner ghosts are never read by the direction-split reconstruction;
    # fill them with the nearest edge value to keep the array finite
    Wp[:, :2, :2] = Wp[:, 2, 2][:, None, None]
    Wp[:, -2:, :2] = Wp[:, -3, 2][:, None, None]
    Wp[:, :2, -2:] = Wp[:, 2, -3][:, None, None]
    Wp[:, -2:, -2:] = Wp[:, -3, -3][:, None, None]
    return Wp


# ---------------------------------------------------------------------------
# reconstruction


def _limited_slope(q_m, q_c, q_p):
    """van Leer limited slope, sigma = phi(r) * (q_c - q_m) with
    phi(r) = (r + |r|)/(1 + |r|); computed in the equivalent product form
    2*d-*d+/(d- + d+) when the one-sided differences agree in sign."""
    dm = q_c - q_m
    dp = q_p - q_c
    prod = dm * dp
    denom = dm + dp
    denom = np.where(denom == 0.0, 1.0, denom)
    return np.where(prod > 0.0, 2.0 * prod / denom, 0.0)


def muscl_reconstruct(Wp: np.ndarray, axis: int, limiter: str = "vanleer"):
    """Per-face left/right primitive states along one index direction.

    ``Wp`` is a 2-deep padded field; axis 0 yields states at the (ni+1, nj)
    i-faces, axis 1 at the (ni, nj+1) j-faces.  ``limiter='zero'`` drops the
    slopes, reproducing the first-order states.
    """
    if axis == 0:
        core = Wp[:, :, 2:-2]
    else:
        core = Wp[:, 2:-2, :].transpose(0, 2, 1)
    if limiter == "zero":
        wl = core[:, 1:-2].copy()
        wr = core[:, 2:-1].copy()
    elif limiter == "vanleer":
        s = _limited_slope(core[:, :-2], core[:, 1:-1], core[:, 2:])
        wl = core[:, 1:-2] + 0.5 * s[:, :-1]
        wr = core[:, 2:-1] - 0.5 * s[:, 1:]
    else:
        raise ValueError(f"unknown limiter {limiter!r}")
    if axis == 1:
        wl = wl.transpose(0, 2, 1)
        wr = wr.transpose(0, 2, 1)
    return wl, wr


def _first_order_states(Wp, axis):
    return muscl_reconstruct(Wp, axis, limiter="zero")


def _fill_blanks_for_sweep(Wp, grid, axis):
    """Overwrite blanked cells that sit next to an active cell along the
    sweep direction with the mirror image of that neighbor, so limited slopes
    of wall-adjacent active cells see a proper reflected state."""
    A = grid.active
    if A.all():
        return Wp
    Wp = Wp.copy()
    blank = ~A
    if axis == 0:
        donor_lo = np.zeros_like(A)
        donor_lo[1:, :] = A[:-1, :]
        donor_hi = np.zeros_like(A)
        donor_hi[:-1, :] = A[1:, :]
        fill_lo = blank & donor_lo
        fill_hi = blank & donor_hi & ~fill_lo
        ii, jj = np.nonzero(fill_lo)
        if ii.size:
            w = Wp[:, ii + 1, jj + 2]
            Wp[:, ii + 2, jj + 2] = _mirror_rows(w, grid.iface_nx[ii, jj], grid.iface_ny[ii, jj])
        ii, jj = np.nonzero(fill_hi)
        if ii.size:
            w = Wp[:, ii + 3, jj + 2]
            Wp[:, ii + 2, jj + 2] = _mirror_rows(w, grid.iface_nx[ii + 1, jj], grid.iface_ny[ii + 1, jj])
    else:
        donor_lo = np.zeros_like(A)
        donor_lo[:, 1:] = A[:, :-1]
        donor_hi = np.zeros_like(A)
        donor_hi[:, :-1] = A[:, 1:]
        fill_lo = blank & donor_lo
        fill_hi = blank & donor_hi & ~fill_lo
        ii, jj = np.nonzero(fill_lo)
        if ii.size:
            w = Wp[:, ii + 2, jj + 1]
            Wp[:, ii + 2, jj + 2] = _mirror_rows(w, grid.jface_nx[ii, jj], grid.jface_ny[ii, jj])
        ii, jj = np.nonzero(fill_hi)
        if ii.size:
            w = Wp[:, ii + 2, jj + 3]
            Wp[:, ii + 2, jj + 2] = _mirror_rows(w, grid.jface_nx[ii, jj + 1], grid.jface_ny[ii, jj + 1])
    return Wp


# ---------------------------------------------------------------------------
# flux assembly


def _wall_masks(grid, axis):
    """Masks of faces adjacent to blanked cells: (interior-side-is-low,
    interior-side-is-high) over the face array of the given direction."""
    A = grid.active
    if axis == 0:
        lo = np.zeros((grid.ni + 1, grid.nj), dtype=bool)
        hi = np.zeros_like(lo)
        lo[1:-1, :] = A[:-1, :] & ~A[1:, :]
        hi[1:-1, :] = ~A[:-1, :] & A[1:, :]
    else:
        lo = np.zeros((grid.ni, grid.nj + 1), dtype=bool)
        hi = np.zeros_like(lo)
        lo[:, 1:-1] = A[:, :-1] & ~A[:, 1:]
        hi[:, 1:-1] = ~A[:, :-1] & A[:, 1:]
    return lo, hi


def _face_flux(grid, wl, wr, gas, scheme, axis):
    """Global-frame flux times face length for every face of one direction."""
    if axis == 0:
        nx, ny, ln = grid.iface_nx, grid.iface_ny, grid.iface_len
    else:
        nx, ny, ln = grid.jface_nx, grid.jface_ny, grid.jface_len

    rho_l, u_l, v_l, p_l = wl
    rho_r, u_r, v_r, p_r = wr
    un_l = u_l * nx + v_l * ny
    ut_l = -u_l * ny + v_l * nx
    un_r = u_r * nx + v_r * ny
    ut_r = -u_r * ny + v_r * nx

    wall_lo, wall_hi = _wall_masks(grid, axis)
    if wall_lo.any():
        # blank side on the right: mirror the interior (left) state
        rho_r = np.where(wall_lo, rho_l, rho_r)
        un_r = np.where(wall_lo, -un_l, un_r)
        ut_r = np.where(wall_lo, ut_l, ut_r)
        p_r = np.where(wall_lo, p_l, p_r)
    if wall_hi.any():
        rho_l = np.where(wall_hi, rho_r, rho_l)
        un_l = np.where(wall_hi, -un_r, un_l)
        ut_l = np.where(wall_hi, ut_r, ut_l)
        p_l = np.where(wall_hi, p_r, p_l)

    f = hllem_family_flux(
        PrimitiveState(rho_l, un_l, ut_l, p_l),
        PrimitiveState(rho_r, un_r, ut_r, p_r),
        gas,
        scheme,
    )
    return np.stack([f[0], f[1] * nx - f[2] * ny, f[1] * ny + f[2] * nx, f[3]]) * ln


def flux_divergence(
    grid: StructuredGrid,
    U: np.ndarray,
    spec: BoundarySpec,
    gas: GasModel,
    scheme: FluxScheme,
    t: float = 0.0,
    order: int = 1,
    limiter: str = "vanleer",
    return_boundary_flux: bool = False,
):
    """dU/dt from the face-flux balance; optionally also the net outward flux
    integral over the four domain edges (for conservation checks)."""
    W = primitive_field(U, gas)
    Wp = apply_boundaries(grid, W, spec, t)
    if order == 1:
        wl_i, wr_i = _first_order_states(Wp, 0)
        wl_j, wr_j = _first_order_states(Wp, 1)
    elif order == 2:
        wl_i, wr_i = muscl_reconstruct(_fill_blanks_for_sweep(Wp, grid, 0), 0, limiter)
        wl_j, wr_j = muscl_reconstruct(_fill_blanks_for_sweep(Wp, grid, 1), 1, limiter)
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")

    Fi = _face_flux(grid, wl_i, wr_i, gas, scheme, axis=0)
    Fj = _face_flux(grid, wl_j, wr_j, gas, scheme, axis=1)

    dU = -(Fi[:, 1:, :] - Fi[:, :-1, :] + Fj[:, :, 1:] - Fj[:, :, :-1]) / grid.area
    dU[:, ~grid.active] = 0.0
    if return_boundary_flux:
        net_out = (
            Fi[:, -1, :].sum(axis=1)
            - Fi[:, 0, :].sum(axis=1)
            + Fj[:, :, -1].sum(axis=1)
            - Fj[:, :, 0].sum(axis=1)
        )
        return dU, net_out
    return dU


# ---------------------------------------------------------------------------
# time stepping


def compute_dt(grid: StructuredGrid, U: np.ndarray, gas: GasModel, cfl: float) -> float:
    """cfl * min over active cells of area / sum_faces (|u.n| + a) * ds."""
    W = primitive_field(U, gas)
    a = np.sqrt(gas.gamma * W[3] / W[0])
    u, v = W[1], W[2]

    def face_term(nx, ny, ln):
        return (np.abs(u * nx + v * ny) + a) * ln

    wsum = (
        face_term(grid.iface_nx[:-1, :], grid.iface_ny[:-1, :], grid.iface_len[:-1, :])
        + face_term(grid.iface_nx[1:, :], grid.iface_ny[1:, :], grid.iface_len[1:, :])
        + face_term(grid.jface_nx[:, :-1], grid.jface_ny[:, :-1], grid.jface_len[:, :-1])
        + face_term(grid.jface_nx[:, 1:], grid.jface_ny[:, 1:], grid.jface_len[:, 1:])
    )
    dt_cells = grid.area / wsum
    return cfl * float(np.min(dt_cells[grid.active]))


def fv_update(
    grid: StructuredGrid,
    U: np.ndarray,
    spec: BoundarySpec,
    gas: GasModel,
    scheme: FluxScheme,
    dt: float,
    t: float = 0.0,
    order: int = 1,
    limiter: str = "vanleer",
) -> np.ndarray:
    """One forward-Euler update."""
    return U + dt * flux_divergence(grid, U, spec, gas, scheme, t, order, limiter)


def ssprk2_combine(u, rhs: Callable, dt: float):
    """Two-stage strong-stability-preserving combination for du/dt = rhs(u):
    u1 = u + dt*rhs(u); result = u/2 + (u1 + dt*rhs(u1))/2."""
    u1 = u + dt * rhs(u)
    return 0.5 * u + 0.5 * (u1 + dt * rhs(u1))


def ssprk2_step(
    grid: StructuredGrid,
    U: np.ndarray,
    spec: BoundarySpec,
    gas: GasModel,
    scheme: FluxScheme,
    dt: float,
    t: float = 0.0,
    order: int = 2,
    limiter: str = "vanleer",
) -> np.ndarray:
    """One SSPRK2 update; boundary states are refreshed at each stage time."""
    U1 = U + dt * flux_divergence(grid, U, spec, gas, scheme, t, order, limiter)
    L1 = flux_divergence(grid, U1, spec, gas, scheme, t + dt, order, limiter)
    return 0.5 * U + 0.5 * (U1 + dt * L1)


def residual_l2(U_old: np.ndarray, U_new: np.ndarray, dt: float, active=None) -> float:
    """sqrt(mean((d rho / dt)^2)) over (active) cells, fixed summation order."""
    d = (U_new[0] - U_old[0]) / dt
    if active is not None:
        d = d[active]
    return float(np.sqrt(np.sum(d * d) / d.size))


# ---------------------------------------------------------------------------
# driver


@dataclass
class SolverConfig:
    scheme: FluxScheme
    order: int = 1
    cfl: float = 0.5
    end_time: Optional[float] = None
    max_iters: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")


@dataclass
class ResidualHistory:
    iterations: list = dataclass_field(default_factory=list)
    times: list = dataclass_field(default_factory=list)
    values: list = dataclass_field(default_factory=list)

    def append(self, iteration: int, time: float, value: float) -> None:
        self.iterations.append(iteration)
        self.times.append(time)
        self.values.append(value)

    def __len__(self) -> int:
        return len(self.values)


class Solver:
    """Owns the evolving field and runs the explicit time loop.

    First-order runs use forward Euler, second-order runs SSPRK2.  A
    NonPhysicalState raised during a step is annotated with the iteration
    and time before propagating.
    """

    def __init__(self, grid, U0, boundaries, gas, scheme, order=1, cfl=0.5,
                 end_time=None, max_iters=None):
        if end_time is None and max_iters is None:
            raise ValueError("need an end condition: end_time or max_iters")
        self.grid = grid
        self.U = np.array(U0, dtype=float, copy=True)
        self.boundaries = boundaries
        self.gas = gas
        self.scheme = scheme
        self.order = order
        self.cfl = cfl
        self.end_time = end_time
        self.max_iters = max_iters
        self.t = 0.0
        self.iteration = 0
        self.history = ResidualHistory()

    @classmethod
    def from_case(cls, case, config: SolverConfig) -> "Solver":
        """Build a solver for a case definition; the config's end conditions
        override the case's when given."""
        end_time = config.end_time
        max_iters = config.max_iters
        if end_time is None and max_iters is None:
            end_time = case.end_time
            max_iters = case.max_iters
        return cls(
            case.grid, case.initial, case.boundaries, case.gas,
            config.scheme, config.order, config.cfl, end_time, max_iters,
        )

    def done(self) -> bool:
        if self.max_iters is not None and self.iteration >= self.max_iters:
            return True
        if self.end_time is not None and self.t >= self.end_time * (1.0 - 1e-12):
            return True
        return False

    def step(self) -> float:
        """Advance one time step; returns the dt taken."""
        try:
            dt = compute_dt(self.grid, self.U, self.gas, self.cfl)
            if self.end_time is not None:
                dt = min(dt, self.end_time - self.t)
            stepper = ssprk2_step if self.order == 2 else fv_update
            U_new = stepper(
                self.grid, self.U, self.boundaries, self.gas, self.scheme,
                dt, self.t, self.order,
            )
        except NonPhysicalState as err:
            err.iteration = self.iteration
            err.time = self.t
            raise
        self.history.append(
            self.iteration + 1, self.t + dt,
            residual_l2(self.U, U_new, dt, self.grid.active),
        )
        self.U = U_new
        self.t += dt
        self.iteration += 1
        return dt

    def run(self, callback: Optional[Callable] = None) -> "Solver":
        """Step until the end condition; ``callback(solver)`` fires after
        every step.  Validates the final field."""
        while not self.done():
            self.step()
            if callback is not None:
                callback(self)
        try:
            primitive_field(self.U, self.gas)
        except NonPhysicalState as err:
            err.iteration = self.iteration
            err.time = self.t
            raise
        return self
