"""Interface fluxes side by side.

Evaluates the four scheme variants on three canonical face states and prints
the flux vectors: a stationary contact (where HLLE smears and HLLEM-family
schemes are exact), a Sod-type jump, and a grid-aligned shock face with zero
normal velocity, where the pressure-scaled variant withdraws its
anti-diffusion.
"""

import numpy as np

from shocklab import (
    FluxScheme,
    GasModel,
    PrimitiveState,
    SchemeKind,
    anti_diffusion,
    hlle_flux,
    hllem_family_flux,
    roe_averages,
)

gas = GasModel()
np.set_printoptions(precision=6, suppress=True)

cases = {
    "stationary contact (rho 1 | 2, u=0, p=1)": (
        PrimitiveState(1.0, 0.0, 0.0, 1.0),
        PrimitiveState(2.0, 0.0, 0.0, 1.0),
    ),
    "Sod jump": (
        PrimitiveState(1.0, 0.0, 0.0, 1.0),
        PrimitiveState(0.125, 0.0, 0.0, 0.1),
    ),
    "grid-aligned shock face (u_n = 0, p 1 | 8)": (
        PrimitiveState(1.0, 0.0, 0.8, 1.0),
        PrimitiveState(3.0, 0.0, -0.4, 8.0),
    ),
}

for title, (wl, wr) in cases.items():
    print(f"\n=== {title} ===")
    for kind in SchemeKind:
        f = hllem_family_flux(wl, wr, gas, FluxScheme(kind))
        print(f"  {kind.value:11s} flux = {f}")
    avg = roe_averages(wl, wr, gas)
    base = anti_diffusion(wl, wr, avg, FluxScheme(SchemeKind.HLLEM))
    scaled = anti_diffusion(wl, wr, avg, FluxScheme(SchemeKind.HLLEM_FP1D))
    print(f"  anti-diffusion delta: hllem {float(base.delta2):.4f} -> fp1d {float(scaled.delta2):.4f}")

print("\nMass flux through the stationary contact:")
wl, wr = cases["stationary contact (rho 1 | 2, u=0, p=1)"]
print(f"  hlle : {float(hlle_flux(wl, wr, gas)[0]):+.6f}  (diffuses the contact)")
print(f"  hllem: {float(hllem_family_flux(wl, wr, gas, FluxScheme(SchemeKind.HLLEM))[0]):+.6f}  (holds it)")
