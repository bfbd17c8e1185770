"""Benchmark case builders, the normal-shock state oracle, and quantitative
instability metrics.

The five cases are the classical shock-instability benchmarks: a perturbed
planar shock in a channel (odd-even decoupling), double Mach reflection
(kinked Mach stem), a Mach 3 forward-facing step, hypersonic flow over a
blunt body (carbuncle), and shock diffraction around a 90-degree corner.
Builders are pure and deterministic: rebuilding a case yields bit-identical
grids and fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SubsonicShock, UnknownCase
from .euler import GasModel, PrimitiveState, conserved_field
from .grid import StructuredGrid
from .solver import (
    BoundarySpec,
    Extrapolate,
    MovingShockTop,
    ReflectiveWall,
    SplitAtX,
    SupersonicInflow,
    ZeroGradientOutflow,
)

_DEG60 = np.deg2rad(60.0)


@dataclass
class ContourSpec:
    """Contour levels a figure of this case should use (inclusive range)."""

    variable: str
    vmin: float
    vmax: float
    levels: int


@dataclass
class CaseDefinition:
    name: str
    grid: StructuredGrid
    initial: np.ndarray  # conserved field, (4, ni, nj)
    boundaries: BoundarySpec
    gas: GasModel
    cfl: float
    end_time: Optional[float]
    max_iters: Optional[int]
    contours: Optional[ContourSpec]


@dataclass
class ShockJump:
    """Pre/post states of a normal shock moving at the given Mach number."""

    mach: float
    pre: PrimitiveState
    post: PrimitiveState
    speed: float  # lab-frame shock speed along +x

    def residuals(self, gas: GasModel) -> np.ndarray:
        """Normalized Rankine-Hugoniot residuals (mass, momentum, enthalpy)
        evaluated in the shock frame."""
        g = gas.gamma
        w = self.speed
        u1 = self.pre.u - w
        u2 = self.post.u - w
        m1 = self.pre.rho * u1
        m2 = self.post.rho * u2
        mom1 = self.pre.rho * u1 * u1 + self.pre.p
        mom2 = self.post.rho * u2 * u2 + self.post.p
        h1 = g / (g - 1.0) * self.pre.p / self.pre.rho + 0.5 * u1 * u1
        h2 = g / (g - 1.0) * self.post.p / self.post.rho + 0.5 * u2 * u2
        return np.array(
            [(m2 - m1) / abs(m1), (mom2 - mom1) / abs(mom1), (h2 - h1) / abs(h1)]
        )


def normal_shock_state(pre: PrimitiveState, mach: float, gas: GasModel) -> ShockJump:
    """Post-shock state of a normal shock propagating along +x into ``pre``
    at shock Mach number ``mach`` (relative to the pre-shock gas)."""
    if not mach > 1.0:
        raise SubsonicShock(f"shock Mach number must exceed 1, got {mach}")
    g = gas.gamma
    a1 = np.sqrt(g * pre.p / pre.rho)
    w = pre.u + mach * a1
    m2 = mach * mach
    rho2 = pre.rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0)
    p2 = pre.p * (2.0 * g * m2 - (g - 1.0)) / (g + 1.0)
    u2 = w + (pre.u - w) * pre.rho / rho2
    return ShockJump(mach, pre, PrimitiveState(rho2, u2, pre.v, p2), w)


def _oblique_post_state(pre: PrimitiveState, mach: float, nx: float, ny: float, gas: GasModel):
    """Post state for a shock whose unit normal (pointing into the pre-shock
    region) is (nx, ny); velocities are rotated through the normal frame."""
    un = pre.u * nx + pre.v * ny
    ut = -pre.u * ny + pre.v * nx
    jump = normal_shock_state(PrimitiveState(pre.rho, un, ut, pre.p), mach, gas)
    q = jump.post
    return PrimitiveState(q.rho, q.u * nx - q.v * ny, q.u * ny + q.v * nx, q.p)


# ---------------------------------------------------------------------------
# case builders


def build_planar_shock(
    ni: int = 800,
    nj: int = 20,
    mach: float = 6.0,
    shock_x: float = 5.0,
    end_time: float = 55.0,
    line_perturbation: float = 1e-3,
) -> CaseDefinition:
    """Mach-6 planar shock in a channel of unit-sized cells; the centerline
    grid line is perturbed up/down by column parity to seed odd-even
    decoupling along the shock."""
    gas = GasModel()
    grid_plain = StructuredGrid.cartesian(ni, nj, (0.0, float(ni)), (0.0, float(nj)))
    verts = grid_plain.vertices.copy()
    jc = nj // 2
    offsets = np.where(np.arange(ni + 1) % 2 == 0, line_perturbation, -line_perturbation)
    verts[:, jc, 1] += offsets
    grid = StructuredGrid(verts)

    pre = PrimitiveState(1.4, 0.0, 0.0, 1.0)
    post = normal_shock_state(pre, mach, gas).post
    xc = grid.centers[:, :, 0]
    W = np.empty((4, ni, nj))
    for k, (a, b) in enumerate(zip((post.rho, post.u, post.v, post.p), (pre.rho, pre.u, pre.v, pre.p))):
        W[k] = np.where(xc < shock_x, a, b)
    bcs = BoundarySpec(
        left=SupersonicInflow(post),
        right=ZeroGradientOutflow(),
        bottom=ReflectiveWall(),
        top=ReflectiveWall(),
    )
    return CaseDefinition(
        "planar_shock", grid, conserved_field(W, gas), bcs, gas,
        cfl=0.5, end_time=end_time, max_iters=None,
        contours=ContourSpec("rho", 1.6, 7.0, 30),
    )


def build_double_mach(ni: int = 480, nj: int = 120, end_time: float = 0.2) -> CaseDefinition:
    """Mach-10 shock hitting a wall at 60 degrees: double Mach reflection on
    a 4 x 1 domain.  The top boundary tracks the analytic shock trajectory."""
    gas = GasModel()
    grid = StructuredGrid.cartesian(ni, nj, (0.0, 4.0), (0.0, 1.0))
    pre = PrimitiveState(1.4, 0.0, 0.0, 1.0)
    nx, ny = np.sin(_DEG60), -np.cos(_DEG60)
    post = _oblique_post_state(pre, 10.0, nx, ny, gas)

    xc = grid.centers[:, :, 0]
    yc = grid.centers[:, :, 1]
    behind = (xc - 1.0 / 6.0) * nx + yc * ny < 0.0
    W = np.empty((4, ni, nj))
    for k, (a, b) in enumerate(zip((post.rho, post.u, post.v, post.p), (pre.rho, pre.u, pre.v, pre.p))):
        W[k] = np.where(behind, a, b)

    bcs = BoundarySpec(
        left=SupersonicInflow(post),
        right=ZeroGradientOutflow(),
        bottom=SplitAtX(1.0 / 6.0, SupersonicInflow(post), ReflectiveWall()),
        top=MovingShockTop(
            pre, post,
            x0=1.0 / 6.0 + 1.0 / np.tan(_DEG60),
            speed_x=20.0 / np.tan(_DEG60),
        ),
    )
    return CaseDefinition(
        "double_mach", grid, conserved_field(W, gas), bcs, gas,
        cfl=0.5, end_time=end_time, max_iters=None,
        contours=ContourSpec("rho", 2.0, 21.5, 30),
    )


def build_forward_step(ni: int = 480, nj: int = 160, end_time: float = 4.0) -> CaseDefinition:
    """Mach-3 flow over a forward-facing step (0.6 units downstream, 0.2
    high) on a 3 x 1 domain; the step region is blanked and its faces act as
    reflective walls."""
    gas = GasModel()
    free = PrimitiveState(1.4, 3.0, 0.0, 1.0)
    grid0 = StructuredGrid.cartesian(ni, nj, (0.0, 3.0), (0.0, 1.0))
    xc = grid0.centers[:, :, 0]
    yc = grid0.centers[:, :, 1]
    active = ~((xc > 0.6) & (yc < 0.2))
    grid = StructuredGrid(grid0.vertices, active)

    W = np.empty((4, ni, nj))
    for k, comp in enumerate((free.rho, free.u, free.v, free.p)):
        W[k] = comp
    bcs = BoundarySpec(
        left=SupersonicInflow(free),
        right=ZeroGradientOutflow(),
        bottom=ReflectiveWall(),
        top=ReflectiveWall(),
    )
    return CaseDefinition(
        "forward_step", grid, conserved_field(W, gas), bcs, gas,
        cfl=0.5, end_time=end_time, max_iters=None,
        contours=ContourSpec("rho", 0.2, 7.0, 45),
    )


def build_blunt_body(
    n_circ: int = 320,
    n_rad: int = 40,
    max_iters: int = 100000,
    seed_amplitude: float = 1e-12,
) -> CaseDefinition:
    """Mach-20 flow over a half-cylinder (body radius 1, outer boundary
    radius 3, radial spacing geometrically clustered toward the body).

    The grid is built mirror-exact about the stagnation line.  A
    deterministic alternating density seed of relative amplitude
    ``seed_amplitude`` is applied along the circumference so that
    carbuncle-prone schemes have a transverse mode to amplify; stable schemes
    damp it back out.
    """
    if n_circ % 2 != 0:
        raise ValueError("n_circ must be even so cells pair across the stagnation line")
    gas = GasModel()
    # geometric radial clustering toward the body with a fixed overall
    # spacing ratio, so coarse and fine grids share one point distribution
    total_ratio = 1.13**20
    growth = total_ratio ** (1.0 / n_rad)
    j = np.arange(n_rad + 1)
    radii = 1.0 + 2.0 * (growth**j - 1.0) / (total_ratio - 1.0)

    # upper-half angles measured from the -x axis; lower half mirrored exactly
    half = n_circ // 2
    phi = np.pi * (np.arange(half + 1)) / n_circ  # 0 .. pi/2
    x_up = -np.cos(phi)[:, None] * radii[None, :]
    y_up = np.sin(phi)[:, None] * radii[None, :]
    y_up[0, :] = 0.0
    verts = np.empty((n_circ + 1, n_rad + 1, 2))
    # i runs from the bottom arc edge (theta=270 deg) to the top (theta=90)
    verts[half:, :, 0] = x_up
    verts[half:, :, 1] = y_up
    verts[:half, :, 0] = x_up[:0:-1, :]
    verts[:half, :, 1] = -y_up[:0:-1, :]
    grid = StructuredGrid(verts)

    free = PrimitiveState(1.4, 20.0, 0.0, 1.0)
    W = np.empty((4, n_circ, n_rad))
    for k, comp in enumerate((free.rho, free.u, free.v, free.p)):
        W[k] = comp
    sign = np.where(np.arange(n_circ) % 2 == 0, 1.0, -1.0)
    W[0] *= 1.0 + seed_amplitude * sign[:, None]

    bcs = BoundarySpec(
        left=Extrapolate(),
        right=Extrapolate(),
        bottom=ReflectiveWall(),
        top=SupersonicInflow(free),
    )
    return CaseDefinition(
        "blunt_body", grid, conserved_field(W, gas), bcs, gas,
        cfl=0.5, end_time=None, max_iters=max_iters,
        contours=ContourSpec("rho", 2.0, 8.7, 27),
    )


def build_supersonic_corner(n: int = 400, end_time: float = 0.1561) -> CaseDefinition:
    """Mach-5.09 normal shock diffracting around a 90-degree corner at
    (0.05, 0.45) in a unit square; the wall block below/left of the corner is
    blanked."""
    gas = GasModel()
    pre = PrimitiveState(1.4, 0.0, 0.0, 1.0)
    post = normal_shock_state(pre, 5.09, gas).post
    grid0 = StructuredGrid.cartesian(n, n, (0.0, 1.0), (0.0, 1.0))
    xc = grid0.centers[:, :, 0]
    yc = grid0.centers[:, :, 1]
    active = ~((xc < 0.05) & (yc < 0.45))
    grid = StructuredGrid(grid0.vertices, active)

    W = np.empty((4, n, n))
    behind = xc < 0.05
    for k, (a, b) in enumerate(zip((post.rho, post.u, post.v, post.p), (pre.rho, pre.u, pre.v, pre.p))):
        W[k] = np.where(behind, a, b)
    bcs = BoundarySpec(
        left=SupersonicInflow(post),
        right=ZeroGradientOutflow(),
        bottom=Extrapolate(),
        top=ReflectiveWall(),
    )
    return CaseDefinition(
        "supersonic_corner", grid, conserved_field(W, gas), bcs, gas,
        cfl=0.8, end_time=end_time, max_iters=None,
        contours=ContourSpec("rho", 0.0, 7.1, 30),
    )


PRESETS = {
    "planar_shock": build_planar_shock,
    "planar_shock_desk": lambda: build_planar_shock(ni=400),
    "double_mach": build_double_mach,
    "double_mach_short": lambda: build_double_mach(end_time=0.020026),
    "forward_step": build_forward_step,
    "forward_step_coarse": lambda: build_forward_step(ni=120, nj=40),
    "blunt_body": build_blunt_body,
    "blunt_body_desk": lambda: build_blunt_body(n_circ=160, n_rad=20, max_iters=20000),
    "supersonic_corner": build_supersonic_corner,
}


def build_preset(name: str) -> CaseDefinition:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise UnknownCase(f"unknown case preset '{name}'") from None
    return builder()


# ---------------------------------------------------------------------------
# instability metrics


def _leading_front(profile) -> int:
    """Column index of the steepest gradient of a 1D density profile."""
    grad = np.abs(np.diff(profile))
    return int(np.argmax(grad))


def instability_metrics(case_name: str, field: np.ndarray) -> dict:
    """Quantitative shock-instability measures for a solution field.

    planar_shock*      -> ``odd_even_amplitude``: max over the 10 columns
                          behind the shock front of half the even/odd row
                          density split, plus the max transverse speed there.
    blunt_body*        -> ``symmetry_deviation``: max density mismatch over
                          mirrored cell pairs, relative to the stagnation
                          density.
    other presets      -> ``centerline_v_max``: max |v| in a band around the
                          leading front on the center rows.

    All metrics are non-negative and vanish on a clean solution.
    """
    rho = field[0]
    v = field[2] / field[0]
    ni, nj = rho.shape

    if case_name.startswith("planar_shock"):
        front = _leading_front(rho.mean(axis=1))
        lo = max(front - 10, 0)
        hi = max(front, lo + 1)
        band = slice(lo, hi)
        even = rho[band, 0::2].mean(axis=1)
        odd = rho[band, 1::2].mean(axis=1)
        checker = float(np.max(0.5 * np.abs(even - odd)))
        v_max = float(np.max(np.abs(v[band, :])))
        return {
            "odd_even_amplitude": checker + v_max,
            "density_checkerboard": checker,
            "transverse_velocity_max": v_max,
        }

    if case_name.startswith("blunt_body"):
        mismatch = float(np.max(np.abs(rho - rho[::-1, :])))
        rho_stag = 0.5 * (rho[ni // 2 - 1, 0] + rho[ni // 2, 0])
        return {"symmetry_deviation": mismatch / rho_stag}

    if case_name.startswith(("double_mach", "forward_step", "supersonic_corner")):
        jc = nj // 2
        rows = slice(max(jc - 1, 0), min(jc + 2, nj))
        front = _leading_front(rho[:, rows].mean(axis=1))
        band = slice(max(front - 5, 0), min(front + 6, ni))
        return {"centerline_v_max": float(np.max(np.abs(v[band, rows])))}

    raise UnknownCase(f"no instability metric defined for case '{case_name}'")
