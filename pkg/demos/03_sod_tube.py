"""Sod shock tube through the 2D engine.

Runs the 100-cell tube with each first-order flux and prints the L1 density
error against the exact self-similar solution, plus a crude ASCII profile of
the density at the end time.
"""

import numpy as np

from shocklab import (
    BoundarySpec,
    FluxScheme,
    GasModel,
    ReflectiveWall,
    Solver,
    StructuredGrid,
    ZeroGradientOutflow,
    conserved_field,
    primitive_field,
)

gas = GasModel()
n = 100
grid = StructuredGrid.cartesian(n, 1, (0.0, 1.0), (0.0, 1.0))
x = grid.centers[:, 0, 0]
W = np.empty((4, n, 1))
W[0] = np.where(x < 0.5, 1.0, 0.125)[:, None]
W[1] = 0.0
W[2] = 0.0
W[3] = np.where(x < 0.5, 1.0, 0.1)[:, None]
U0 = conserved_field(W, gas)
bcs = BoundarySpec(ZeroGradientOutflow(), ZeroGradientOutflow(), ReflectiveWall(), ReflectiveWall())


def exact_density(xs, t):
    # two-rarefaction/two-shock pressure iteration, specialized to Sod states
    g = 1.4
    a_l, a_r = np.sqrt(g * 1.0 / 1.0), np.sqrt(g * 0.1 / 0.125)
    p = 0.5 * (1.0 + 0.1)
    for _ in range(60):
        f_l = 2 * a_l / (g - 1) * ((p / 1.0) ** ((g - 1) / (2 * g)) - 1)
        df_l = 1 / (1.0 * a_l) * (p / 1.0) ** (-(g + 1) / (2 * g))
        A = 2 / ((g + 1) * 0.125)
        B = (g - 1) / (g + 1) * 0.1
        f_r = (p - 0.1) * np.sqrt(A / (p + B))
        df_r = np.sqrt(A / (B + p)) * (1 - (p - 0.1) / (2 * (B + p)))
        p = max(p - (f_l + f_r) / (df_l + df_r), 1e-10)
    u = 0.5 * (f_r - f_l)
    rho_sl = 1.0 * (p / 1.0) ** (1 / g)
    a_sl = a_l * (p / 1.0) ** ((g - 1) / (2 * g))
    rho_sr = 0.125 * ((p / 0.1 + (g - 1) / (g + 1)) / ((g - 1) / (g + 1) * p / 0.1 + 1))
    # shock speed from the undisturbed right state (u_r = 0)
    s_shock = a_r * np.sqrt((g + 1) / (2 * g) * p / 0.1 + (g - 1) / (2 * g))
    out = np.empty_like(xs)
    for k, xi in enumerate((xs - 0.5) / t):
        if xi < -a_l:
            out[k] = 1.0
        elif xi < u - a_sl:
            a = 2 / (g + 1) * (a_l - (g - 1) / 2 * xi)
            out[k] = 1.0 * (a / a_l) ** (2 / (g - 1))
        elif xi < u:
            out[k] = rho_sl
        elif xi < s_shock:
            out[k] = rho_sr
        else:
            out[k] = 0.125
    return out


exact = exact_density(x, 0.2)
profiles = {}
for name in ("hlle", "hllem", "hllem_lm", "hllem_fp1d"):
    s = Solver(grid, U0, bcs, gas, FluxScheme.from_name(name), cfl=0.9, end_time=0.2).run()
    rho = primitive_field(s.U, gas)[0][:, 0]
    profiles[name] = rho
    print(f"{name:11s} L1(rho) = {np.sum(np.abs(rho - exact)) / n:.5f}  ({s.iteration} steps)")

print("\ndensity profile (hllem vs exact), '#' = hllem, '.' = exact:")
for row in range(12, -1, -2):
    level = 0.125 + row / 12 * (1.0 - 0.125)
    line = ""
    for k in range(0, n, 2):
        hit_num = abs(profiles["hllem"][k] - level) < 0.04
        hit_exact = abs(exact[k] - level) < 0.04
        line += "#" if hit_num else ("." if hit_exact else " ")
    print(f"  rho={level:4.2f} |{line}")
