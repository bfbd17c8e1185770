"""Figure builders.

Contour levels always come from the snapshot's sidecar, never from the data,
so figures of the same case under different schemes are directly comparable.
All functions write an image file and return the matplotlib figure together
with whatever parsed inputs a caller may want to inspect.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .readers import (
    Trace,
    base_states_match,
    read_contour_sidecar,
    read_field,
    read_residual_history,
    read_trace,
    sidecar_path_for,
)


def plot_contours(field_path, out_path, sidecar_path=None):
    """Line contours of the sidecar-specified variable at exactly the
    sidecar-specified levels, on equal-aspect axes."""
    if sidecar_path is None:
        sidecar_path = sidecar_path_for(field_path)
    levels = read_contour_sidecar(sidecar_path)
    field = read_field(field_path)
    if levels.variable not in field.data:
        raise ValueError(f"sidecar variable {levels.variable!r} not present in {field_path}")

    fig, ax = plt.subplots(figsize=(7.5, 5.0))
    cs = ax.contour(
        field["x"], field["y"], field[levels.variable],
        levels=levels.values(), linewidths=0.7, colors="black",
    )
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(
        f"{levels.variable}: {levels.count} levels in [{levels.vmin:g}, {levels.vmax:g}]"
    )
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return cs, levels


def plot_phase_portrait(trace_paths, out_path):
    """Overlaid (rho^, p^) trajectories with step markers; every trace must
    carry the same base state in its meta sidecar."""
    traces: list[Trace] = [read_trace(p) for p in trace_paths]
    if not traces:
        raise ValueError("no traces given")
    for t in traces[1:]:
        if not base_states_match(traces[0], t):
            raise ValueError("traces carry different base states; refusing to overlay")

    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    for path, t in zip(trace_paths, traces):
        label = t.meta.get("family", os.path.basename(str(path)))
        (line,) = ax.plot(t.rho_hat, t.p_hat, marker="o", markersize=3, label=label)
        ax.annotate(
            f"dV0 = {t.delta_v[0]:+.3g}",
            xy=(t.rho_hat[0], t.p_hat[0]),
            xytext=(4, 4),
            textcoords="offset points",
            fontsize=8,
            color=line.get_color(),
        )
        ax.plot(t.rho_hat[0], t.p_hat[0], marker="s", color=line.get_color())
    ax.axhline(0.0, lw=0.5, color="gray")
    ax.axvline(0.0, lw=0.5, color="gray")
    ax.set_xlabel("density deviation")
    ax.set_ylabel("pressure deviation")
    ax.legend()
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return fig, traces


def plot_residuals(history_paths, out_path):
    """Residual L2 norm against iteration count on a log scale; several
    histories overlay with a legend."""
    if not history_paths:
        raise ValueError("no residual histories given")
    parsed = []
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for path in history_paths:
        iters, _, values = read_residual_history(path)
        parsed.append((iters, values))
        stem = os.path.splitext(os.path.basename(str(path)))[0]
        ax.semilogy(iters, np.maximum(values, 1e-300), label=stem, lw=0.9)
    ax.set_xlabel("iteration")
    ax.set_ylabel("density residual (L2)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return fig, parsed
