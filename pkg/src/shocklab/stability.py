"""Discrete stability laboratory for HLL-family schemes.

For a grid-aligned steady shock plane the transverse perturbation dynamics of
each scheme family reduce to a three-variable recurrence in the deviations
(rho^, rho*u^, p^) of density, transverse momentum and pressure from the
steady state.  This module implements

* the linearized amplification matrices of the five constant-coefficient
  families and their eigenvalue (reduced-Lyapunov) verdicts,
* the quadratic Lyapunov candidate V and its per-step change dV, both in
  definitional form (V after minus V before) and in the per-family closed
  forms,
* the nonlinear recurrence of the pressure-scaled scheme (hllem_fp1d), whose
  anti-diffusion coefficient is re-evaluated from the instantaneous pressure
  deviation at every step,
* phase-portrait traces and dV sign maps for reporting.

Perturbation fields may be scalars or same-shaped arrays, so sign maps can be
evaluated over whole sample grids at once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedFamily, ZeroBaseVelocity


class SchemeFamily(enum.Enum):
    HLLE = "hlle"
    ROE_HLLEM_HLLC = "roe_hllem_hllc"
    HLL_CPS = "hll_cps"
    HLLCM_HLLEC = "hllcm_hllec"
    HLLS_HLLES = "hlls_hlles"
    HLLEM_FP1D = "hllem_fp1d"


#: Families whose one-step update is a constant matrix (everything except the
#: nonlinear pressure-scaled scheme).
MATRIX_FAMILIES = (
    SchemeFamily.HLLE,
    SchemeFamily.ROE_HLLEM_HLLC,
    SchemeFamily.HLL_CPS,
    SchemeFamily.HLLCM_HLLEC,
    SchemeFamily.HLLS_HLLES,
)

#: Families with a perturbation-evolution recurrence (HLL_CPS only has a
#: linearized amplification matrix).
RECURRENCE_FAMILIES = (
    SchemeFamily.HLLE,
    SchemeFamily.ROE_HLLEM_HLLC,
    SchemeFamily.HLLCM_HLLEC,
    SchemeFamily.HLLS_HLLES,
    SchemeFamily.HLLEM_FP1D,
)

# Exponent of the one-dimensional pressure function in the hllem_fp1d
# recurrence (fixed; the flux-level exponent is configurable separately).
_FP1D_EXPONENT = 1.0 / 3.0


@dataclass(frozen=True)
class BaseState:
    """Steady base state of the transverse plane.

    ``u0`` is the steady transverse velocity (the normal velocity is zero
    throughout this analysis) and ``nu`` the linearized CFL number
    dt*(a0+|v0|)/dy.
    """

    rho0: float = 1.0
    u0: float = 1.0
    p0: float = 1.0
    gamma: float = 1.4
    nu: float = 0.45

    def __post_init__(self):
        if self.rho0 <= 0.0 or self.p0 <= 0.0:
            raise ValueError("base density and pressure must be positive")
        if self.gamma <= 1.0:
            raise ValueError("gamma must exceed 1")
        if not 0.0 < self.nu < 1.0:
            raise ValueError(f"linearized CFL number must lie in (0, 1), got {self.nu}")

    @property
    def a0(self) -> float:
        return float(np.sqrt(self.gamma * self.p0 / self.rho0))


@dataclass
class PerturbationState:
    """Deviation triple (rho^, rho*u^, p^) from the steady state."""

    rho_hat: float | np.ndarray
    rhou_hat: float | np.ndarray
    p_hat: float | np.ndarray

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.rho_hat, self.rhou_hat, self.p_hat))


@dataclass
class TracePoint:
    step: int
    state: PerturbationState
    v: float
    delta_v: float


@dataclass
class LyapunovTrace:
    """Phase-portrait trace: per-step perturbation, V and dV values."""

    family: SchemeFamily
    base: BaseState
    points: list[TracePoint] = field(default_factory=list)


@dataclass
class RegionMap:
    """dV evaluated over a sample grid of perturbations, with signs."""

    family: SchemeFamily
    base: BaseState
    samples: np.ndarray  # (n, 3) rows of (rho_hat, rhou_hat, p_hat)
    delta_v: np.ndarray  # (n,)
    sign: np.ndarray  # (n,) in {-1, 0, +1}


def primitive_amplification_matrix(family: SchemeFamily, nu: float, gamma: float = 1.4) -> np.ndarray:
    """One-step update matrix in normalized primitive perturbations
    (rho^, u^, p^) for the constant-coefficient families.

    Normalized means a unit base state (rho0 = p0 = 1), where a0^2 = gamma.
    """
    if family is SchemeFamily.HLLEM_FP1D:
        raise UnsupportedFamily("hllem_fp1d is nonlinear; it has no constant amplification matrix")
    if not 0.0 < nu < 1.0:
        raise ValueError(f"nu must lie in (0, 1), got {nu}")
    d = 1.0 - 2.0 * nu
    feed = -2.0 * nu / gamma
    if family is SchemeFamily.HLLE:
        return np.diag([d, d, d])
    if family is SchemeFamily.ROE_HLLEM_HLLC:
        return np.array([[1.0, 0.0, feed], [0.0, 1.0, 0.0], [0.0, 0.0, d]])
    if family is SchemeFamily.HLL_CPS:
        return np.array([[1.0, 0.0, feed], [0.0, 1.0 - 2.0 * nu / gamma, 0.0], [0.0, 0.0, d]])
    if family is SchemeFamily.HLLCM_HLLEC:
        return np.array([[1.0, 0.0, feed], [0.0, d, 0.0], [0.0, 0.0, d]])
    if family is SchemeFamily.HLLS_HLLES:
        return np.array([[d, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, d]])
    raise UnsupportedFamily(str(family))


def reduced_lyapunov_verdict(family: SchemeFamily, nu: float, gamma: float = 1.4) -> str:
    """'AsymptoticallyStable' iff the spectral radius of the amplification
    matrix is strictly below one; 'Inconclusive' when an eigenvalue sits on
    the unit circle (to 1e-12)."""
    m = primitive_amplification_matrix(family, nu, gamma)
    radius = float(np.max(np.abs(np.linalg.eigvals(m))))
    if radius < 1.0 - 1e-12:
        return "AsymptoticallyStable"
    return "Inconclusive"


def primitive_from_conserved_perturbation(x: PerturbationState, base: BaseState) -> np.ndarray:
    """Map conserved deviations (rho^, rho*u^, p^) to primitive perturbations
    (rho^, u^, p^) at the base state: u^ = (rho*u^ - u0 rho^)/rho0."""
    u_hat = (x.rhou_hat - base.u0 * x.rho_hat) / base.rho0
    return np.stack(np.broadcast_arrays(x.rho_hat, u_hat, x.p_hat))


def conserved_from_primitive_perturbation(y, base: BaseState) -> PerturbationState:
    """Inverse of :func:`primitive_from_conserved_perturbation`."""
    rho_hat, u_hat, p_hat = y[0], y[1], y[2]
    return PerturbationState(rho_hat, base.u0 * rho_hat + base.rho0 * u_hat, p_hat)


def lyapunov_value(x: PerturbationState, base: BaseState):
    """Quadratic Lyapunov candidate
    V = (a0^2/rho0) rho^2 + (a0^2/(rho0 u0^2)) (rho*u^)^2 + p^2/(rho0 a0^2)."""
    if base.u0 == 0.0:
        raise ZeroBaseVelocity("the transverse-momentum weight diverges at u0 = 0")
    a0sq = base.a0**2
    return (
        (a0sq / base.rho0) * x.rho_hat**2
        + (a0sq / (base.rho0 * base.u0**2)) * x.rhou_hat**2
        + (1.0 / (base.rho0 * a0sq)) * x.p_hat**2
    )


def fp1d_delta(p_hat, p0: float):
    """State-dependent anti-diffusion coefficient of the pressure-scaled
    scheme on a saw-tooth pressure deviation:
    delta = 1 - (2|p^| / (p0 + |p^|))^(1/3)."""
    ap = np.abs(p_hat)
    return 1.0 - (2.0 * ap / (p0 + ap)) ** _FP1D_EXPONENT


def step_perturbation(family: SchemeFamily, x: PerturbationState, base: BaseState) -> PerturbationState:
    """Advance the perturbation one time step by the family's recurrence.

    The pressure deviation contracts by (1 - 2 nu) in every family; the
    families differ in how the density and transverse-momentum deviations are
    damped or fed by the pressure deviation.
    """
    nu = base.nu
    a0sq = base.a0**2
    two_nu = 2.0 * nu
    r, m, p = x.rho_hat, x.rhou_hat, x.p_hat
    if family is SchemeFamily.HLLE:
        return PerturbationState(r - two_nu * r, m - two_nu * m, p - two_nu * p)
    if family is SchemeFamily.ROE_HLLEM_HLLC:
        return PerturbationState(
            r - two_nu * p / a0sq,
            m - two_nu * base.u0 * p / a0sq,
            p - two_nu * p,
        )
    if family is SchemeFamily.HLLCM_HLLEC:
        return PerturbationState(
            r - two_nu * p / a0sq,
            m - two_nu * (m - base.u0 * r + base.u0 * p / a0sq),
            p - two_nu * p,
        )
    if family is SchemeFamily.HLLS_HLLES:
        return PerturbationState(r - two_nu * r, m - two_nu * base.u0 * r, p - two_nu * p)
    if family is SchemeFamily.HLLEM_FP1D:
        delta = fp1d_delta(p, base.p0)
        return PerturbationState(
            r - two_nu * ((1.0 - delta) * r + delta * p / a0sq),
            m - two_nu * ((1.0 - delta) * m + delta * base.u0 * p / a0sq),
            p - two_nu * p,
        )
    raise UnsupportedFamily(f"{family.value} has no perturbation-evolution recurrence")


def delta_v(family: SchemeFamily, x: PerturbationState, base: BaseState):
    """Definitional per-step change of the Lyapunov function,
    dV = V(step(x)) - V(x)."""
    return lyapunov_value(step_perturbation(family, x, base), base) - lyapunov_value(x, base)


def delta_v_closed_form(family: SchemeFamily, x: PerturbationState, base: BaseState):
    """Per-family closed-form dV expressions.

    For HLLCM_HLLEC the closed form covers the zero-shear-velocity special
    case rho*u^ = u0 rho^ only; elsewhere it is exact.  The nonlinear
    pressure-scaled family has no closed form.
    """
    if base.u0 == 0.0:
        raise ZeroBaseVelocity("the transverse-momentum weight diverges at u0 = 0")
    nu = base.nu
    a0sq = base.a0**2
    r, m, p = x.rho_hat, x.rhou_hat, x.p_hat
    if family is SchemeFamily.HLLE:
        return -4.0 * nu * (1.0 - nu) * lyapunov_value(x, base)
    if family in (SchemeFamily.ROE_HLLEM_HLLC, SchemeFamily.HLLCM_HLLEC):
        return (
            -(4.0 * nu / base.rho0) * r * p
            + (8.0 * nu**2 / (base.rho0 * a0sq)) * p**2
            - (4.0 * nu / (base.rho0 * base.u0)) * m * p
            - (4.0 * nu * (1.0 - nu) / (base.rho0 * a0sq)) * p**2
        )
    if family is SchemeFamily.HLLS_HLLES:
        return (
            -(a0sq / base.rho0) * 4.0 * nu * (1.0 - 2.0 * nu) * r**2
            - (a0sq / (base.rho0 * base.u0)) * 4.0 * nu * r * m
            - (4.0 * nu * (1.0 - nu) / (base.rho0 * a0sq)) * p**2
        )
    raise UnsupportedFamily(f"no closed-form dV for {family.value}")


def phase_portrait(
    family: SchemeFamily,
    x0: PerturbationState,
    base: BaseState,
    n_steps: int,
) -> LyapunovTrace:
    """Iterate the recurrence from ``x0`` and record (state, V, dV) at every
    step; the trace has n_steps + 1 points and each dV entry equals
    ``delta_v`` evaluated at that point."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    trace = LyapunovTrace(family, base)
    x = x0
    for k in range(n_steps + 1):
        v = float(lyapunov_value(x, base))
        dv = float(delta_v(family, x, base))
        trace.points.append(TracePoint(k, x, v, dv))
        if k < n_steps:
            x = step_perturbation(family, x, base)
    return trace


def stability_region_map(family: SchemeFamily, base: BaseState, samples) -> RegionMap:
    """Evaluate sign(dV) over an (n, 3) array of perturbation samples."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[1] != 3:
        raise ValueError("samples must have three columns (rho^, rho*u^, p^)")
    x = PerturbationState(samples[:, 0], samples[:, 1], samples[:, 2])
    dv = np.asarray(delta_v(family, x, base))
    return RegionMap(family, base, samples, dv, np.sign(dv).astype(int))
