"""HLL-family interface fluxes.

Four variants share one kernel:

* ``HLLE``       -- two-wave flux with Einfeldt speed estimates.
* ``HLLEM``      -- HLLE plus anti-diffusion restoring the contact and shear
                    waves, with the contact speed taken as the Roe-averaged
                    normal velocity.
* ``HLLEM_LM``   -- HLLEM plus a low-Mach scaling of the normal-velocity-jump
                    dissipation (Dellacherie-type local Mach weighting).
* ``HLLEM_FP1D`` -- HLLEM_LM with the anti-diffusion coefficients scaled down
                    by a one-dimensional pressure function, which suppresses
                    shock instabilities at high Mach numbers.

All operations expect both states expressed in the face frame: ``u`` is the
face-normal velocity component and ``v`` the tangential one.  Fields may be
scalars or arrays (one entry per face).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFan
from .euler import (
    ConservedState,
    GasModel,
    PrimitiveState,
    conserved_from_primitive,
    physical_flux_x,
)

# Relative threshold below which the acoustic fan is considered degenerate.
_FAN_EPS = 1e-12


class SchemeKind(enum.Enum):
    HLLE = "hlle"
    HLLEM = "hllem"
    HLLEM_LM = "hllem_lm"
    HLLEM_FP1D = "hllem_fp1d"


@dataclass(frozen=True)
class FluxScheme:
    """Flux selector: the scheme kind plus the pressure-function exponent r
    (used by HLLEM_FP1D only)."""

    kind: SchemeKind
    r: float = 1.0 / 3.0

    def __post_init__(self):
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"pressure-function exponent r must lie in (0, 1], got {self.r}")

    @classmethod
    def from_name(cls, name: str, r: float = 1.0 / 3.0) -> "FluxScheme":
        return cls(SchemeKind(name.lower()), r)


@dataclass
class RoeAverages:
    """Roe-averaged face quantities (sqrt-rho weighted)."""

    u_n_tilde: float | np.ndarray
    u_t_tilde: float | np.ndarray
    a_tilde: float | np.ndarray
    rho_tilde: float | np.ndarray
    H_tilde: float | np.ndarray


@dataclass
class WaveSpeeds:
    s_l: float | np.ndarray
    s_r: float | np.ndarray


@dataclass
class AntiDiffusion:
    """Coefficients and wave strengths of the linearly degenerate waves."""

    delta2: float | np.ndarray
    delta3: float | np.ndarray
    alpha2: float | np.ndarray
    alpha3: float | np.ndarray


def roe_averages(w_l: PrimitiveState, w_r: PrimitiveState, gas: GasModel) -> RoeAverages:
    """sqrt(rho)-weighted velocity and enthalpy averages; rho_tilde is the
    geometric mean and a_tilde follows from the averaged total enthalpy."""
    sq_l = np.sqrt(w_l.rho)
    sq_r = np.sqrt(w_r.rho)
    wsum = sq_l + sq_r
    u_n = (sq_l * w_l.u + sq_r * w_r.u) / wsum
    u_t = (sq_l * w_l.v + sq_r * w_r.v) / wsum
    H_l = (w_l.p / (gas.gamma - 1.0) + 0.5 * w_l.rho * (w_l.u**2 + w_l.v**2) + w_l.p) / w_l.rho
    H_r = (w_r.p / (gas.gamma - 1.0) + 0.5 * w_r.rho * (w_r.u**2 + w_r.v**2) + w_r.p) / w_r.rho
    H = (sq_l * H_l + sq_r * H_r) / wsum
    a2 = (gas.gamma - 1.0) * (H - 0.5 * (u_n * u_n + u_t * u_t))
    return RoeAverages(u_n, u_t, np.sqrt(a2), sq_l * sq_r, H)


def _speed_estimates(w_l, w_r, avg, gas, clamp_zero):
    a_l = w_l.sound_speed(gas)
    a_r = w_r.sound_speed(gas)
    s_l = np.minimum(w_l.u - a_l, avg.u_n_tilde - avg.a_tilde)
    s_r = np.maximum(w_r.u + a_r, avg.u_n_tilde + avg.a_tilde)
    if clamp_zero:
        s_l = np.minimum(0.0, s_l)
        s_r = np.maximum(0.0, s_r)
    return s_l, s_r


def _degenerate(s_l, s_r):
    scale = np.maximum(np.maximum(np.abs(s_l), np.abs(s_r)), 1.0)
    return (s_r - s_l) < _FAN_EPS * scale


def wave_speeds(
    w_l: PrimitiveState,
    w_r: PrimitiveState,
    avg: RoeAverages,
    gas: GasModel,
    clamp_zero: bool = True,
) -> WaveSpeeds:
    """Einfeldt acoustic speed estimates; with ``clamp_zero`` zero is included
    in the min/max so that S_L <= 0 <= S_R.

    Raises DegenerateFan when the fan width underflows the relative threshold.
    """
    s_l, s_r = _speed_estimates(w_l, w_r, avg, gas, clamp_zero=clamp_zero)
    if np.any(_degenerate(s_l, s_r)):
        raise DegenerateFan("coincident wave-speed estimates")
    return WaveSpeeds(s_l, s_r)


def hll_intermediate_state(w_l: PrimitiveState, w_r: PrimitiveState, gas: GasModel) -> ConservedState:
    """Single intermediate state of the two-wave Riemann fan,
    U* = (S_R U_R - S_L U_L + F_L - F_R) / (S_R - S_L), using the unclamped
    speed estimates.  Callers are expected to pass states with S_L < 0 < S_R."""
    avg = roe_averages(w_l, w_r, gas)
    s_l, s_r = _speed_estimates(w_l, w_r, avg, gas, clamp_zero=False)
    if np.any(_degenerate(s_l, s_r)):
        raise DegenerateFan("coincident wave-speed estimates")
    U_l = conserved_from_primitive(w_l, gas).as_array()
    U_r = conserved_from_primitive(w_r, gas).as_array()
    F_l = physical_flux_x(w_l, gas)
    F_r = physical_flux_x(w_r, gas)
    star = (s_r * U_r - s_l * U_l + F_l - F_r) / (s_r - s_l)
    return ConservedState.from_array(star)


def anti_diffusion(
    w_l: PrimitiveState,
    w_r: PrimitiveState,
    avg: RoeAverages,
    scheme: FluxScheme,
) -> AntiDiffusion:
    """Coefficients delta2/delta3 and strengths alpha2/alpha3 of the contact
    and shear waves.

    Base coefficients: delta = a~/(a~ + |u_n~|).  For HLLEM_FP1D both are
    scaled by 1 - (|dp| / p_max)^r, which shuts the anti-diffusion off across
    strong pressure jumps (i.e. captured shocks).
    """
    delta = avg.a_tilde / (avg.a_tilde + np.abs(avg.u_n_tilde))
    if scheme.kind is SchemeKind.HLLEM_FP1D:
        dp_abs = np.abs(w_l.p - w_r.p)
        p_max = np.maximum(w_l.p, w_r.p)
        delta = delta * (1.0 - (dp_abs / p_max) ** scheme.r)
    # signed jumps, (.)_R - (.)_L
    alpha2 = (w_r.rho - w_l.rho) - (w_r.p - w_l.p) / avg.a_tilde**2
    alpha3 = avg.rho_tilde * (w_r.v - w_l.v)
    return AntiDiffusion(delta, delta, alpha2, alpha3)


def _flux_kernel(w_l, w_r, gas, scheme, delta_override=None):
    avg = roe_averages(w_l, w_r, gas)
    s_l, s_r = _speed_estimates(w_l, w_r, avg, gas, clamp_zero=True)
    degenerate = _degenerate(s_l, s_r)
    span = np.where(degenerate, 1.0, s_r - s_l)

    U_l = conserved_from_primitive(w_l, gas).as_array()
    U_r = conserved_from_primitive(w_r, gas).as_array()
    F_l = physical_flux_x(w_l, gas)
    F_r = physical_flux_x(w_r, gas)
    dU = U_r - U_l

    correction = dU
    if scheme.kind is not SchemeKind.HLLE or delta_override is not None:
        if delta_override is None:
            ad = anti_diffusion(w_l, w_r, avg, scheme)
            d2, d3 = ad.delta2, ad.delta3
        else:
            ad = anti_diffusion(w_l, w_r, avg, FluxScheme(SchemeKind.HLLEM))
            d2 = d3 = delta_override
        un, ut = avg.u_n_tilde, avg.u_t_tilde
        c2 = d2 * ad.alpha2
        c3 = d3 * ad.alpha3
        # B dU = delta2*alpha2*R2 + delta3*alpha3*R3 with
        # R2 = [1, un, ut, (un^2+ut^2)/2], R3 = [0, 0, 1, ut]
        b0 = c2
        b1 = c2 * un
        b2 = c2 * ut + c3
        b3 = c2 * 0.5 * (un * un + ut * ut) + c3 * ut
        correction = dU - np.stack(np.broadcast_arrays(b0, b1, b2, b3))

    flux = (s_r * F_l - s_l * F_r) / span + (s_r * s_l / span) * correction

    if scheme.kind in (SchemeKind.HLLEM_LM, SchemeKind.HLLEM_FP1D):
        theta = np.minimum(np.maximum(w_l.mach(gas), w_r.mach(gas)), 1.0)
        flux[1] = flux[1] - (1.0 - theta) * avg.rho_tilde * avg.a_tilde * (w_r.u - w_l.u)

    if np.any(degenerate):
        upwind = np.where(avg.u_n_tilde >= 0.0, F_l, F_r)
        flux = np.where(degenerate, upwind, flux)
    return flux


def hlle_flux(w_l: PrimitiveState, w_r: PrimitiveState, gas: GasModel) -> np.ndarray:
    """Two-wave HLLE flux with zero-clamped Einfeldt speeds."""
    return _flux_kernel(w_l, w_r, gas, FluxScheme(SchemeKind.HLLE))


def hllem_family_flux(
    w_l: PrimitiveState,
    w_r: PrimitiveState,
    gas: GasModel,
    scheme: FluxScheme,
) -> np.ndarray:
    """Face-normal numerical flux for any of the four scheme variants."""
    return _flux_kernel(w_l, w_r, gas, scheme)
