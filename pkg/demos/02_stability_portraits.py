"""The stability laboratory in one sitting.

1. Amplification-matrix eigenvalues and reduced-Lyapunov verdicts for the
   five constant-coefficient scheme families.
2. The sign structure of the per-step Lyapunov change dV.
3. Phase portraits from the critical configuration (negative density /
   positive pressure deviation): the complete schemes walk away from the
   steady state, the pressure-scaled scheme walks back.

Writes trace CSVs to demos_out/ so the plotting package can draw Fig-2-style
portraits from them.
"""

import os

import numpy as np

from shocklab import (
    BaseState,
    PerturbationState,
    SchemeFamily,
    delta_v,
    phase_portrait,
    primitive_amplification_matrix,
    reduced_lyapunov_verdict,
    stability_region_map,
)
from shocklab.artifacts import write_region_map_csv, write_trace_csv
from shocklab.stability import MATRIX_FAMILIES

base = BaseState()  # rho0 = p0 = 1, u0 = 1, gamma = 1.4, nu = 0.45
out = "demos_out"
os.makedirs(out, exist_ok=True)

print(f"base state: rho0={base.rho0} u0={base.u0} p0={base.p0} nu={base.nu} (a0={base.a0:.4f})\n")

print("eigenvalues of the linearized update map (nu = 0.45):")
for family in MATRIX_FAMILIES:
    lams = np.sort(np.linalg.eigvals(primitive_amplification_matrix(family, base.nu)).real)
    verdict = reduced_lyapunov_verdict(family, base.nu)
    print(f"  {family.value:16s} {np.round(lams, 4)}  -> {verdict}")

print("\nsign of dV over the +++ / --+ octants (nu = 0.2):")
small = BaseState(nu=0.2)
rng = np.random.default_rng(0)
octant = rng.uniform(0.01, 1.0, (2000, 3))
flipped = octant * np.array([-1.0, -1.0, 1.0])
for family in (SchemeFamily.HLLE, SchemeFamily.ROE_HLLEM_HLLC, SchemeFamily.HLLS_HLLES):
    pos = stability_region_map(family, small, octant)
    neg = stability_region_map(family, small, flipped)
    print(
        f"  {family.value:16s} same-sign octant: {np.bincount(pos.sign + 1, minlength=3)} "
        f"(-1/0/+1 counts), opposite-sign octant: {np.bincount(neg.sign + 1, minlength=3)}"
    )
write_region_map_csv(stability_region_map(SchemeFamily.ROE_HLLEM_HLLC, small, flipped),
                     os.path.join(out, "roe_family_sign_map.csv"))

print("\nphase portraits from (rho^, rho*u^, p^) = (-0.1, -0.1, +0.1):")
x0 = PerturbationState(-0.1, -0.1 * base.u0, 0.1)
for family in (SchemeFamily.ROE_HLLEM_HLLC, SchemeFamily.HLLEM_FP1D):
    trace = phase_portrait(family, x0, base, 40)
    first = trace.points[0]
    last = trace.points[-1]
    print(
        f"  {family.value:16s} first-step dV = {first.delta_v:+.5f}, "
        f"V: {first.v:.5f} -> {last.v:.5f}, "
        f"rho^: {x0.rho_hat:+.4f} -> {last.state.rho_hat:+.4f}, "
        f"p^ -> {last.state.p_hat:+.2e}"
    )
    write_trace_csv(trace, os.path.join(out, f"trace_{family.value}.csv"))

print(f"\ntraces and sign map written to {out}/")
print("render with: shockplot phase demos_out/trace_roe_hllem_hllc.csv "
      "demos_out/trace_hllem_fp1d.csv -o demos_out/phase.png")
