import hashlib
import json

import numpy as np
import pytest

from shockplot import (
    plot_contours,
    plot_phase_portrait,
    plot_residuals,
    read_contour_sidecar,
    read_field,
    read_residual_history,
    read_trace,
)

FMT = "%.17g"


def write_field(path, ni=6, nj=4, rho=None):
    lines = ["i,j,x,y,rho,u,v,p,mach"]
    for j in range(nj):
        for i in range(ni):
            r = 1.0 if rho is None else rho[i, j]
            vals = (i + 0.5, j + 0.5, r, 0.1, -0.2, 2.0, 0.3)
            lines.append(f"{i},{j}," + ",".join(FMT % v for v in vals))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_sidecar(path, variable="rho", vmin=1.6, vmax=7.0, levels=30):
    path.write_text(json.dumps({"variable": variable, "min": vmin, "max": vmax, "levels": levels}))
    return path


def write_trace(path, rho_hat, p_hat, v, dv, meta=True, base=None):
    lines = ["step,rho_hat,rhou_hat,p_hat,V,delta_V"]
    for k in range(len(rho_hat)):
        lines.append(
            f"{k},{FMT % rho_hat[k]},{FMT % rho_hat[k]},{FMT % p_hat[k]},{FMT % v[k]},{FMT % dv[k]}"
        )
    path.write_text("\n".join(lines) + "\n")
    if meta:
        payload = {"family": "hlle", "rho0": 1.0, "u0": 1.0, "p0": 1.0, "gamma": 1.4, "nu": 0.45,
                   "steps": len(rho_hat) - 1}
        if base:
            payload.update(base)
        (path.parent / (path.name + ".meta.json")).write_text(json.dumps(payload))
    return path


def write_history(path, values):
    lines = ["iteration,time,density_residual_l2"]
    for k, v in enumerate(values):
        lines.append(f"{k + 1},{FMT % (0.01 * (k + 1))},{FMT % v}")
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# readers


def test_read_field_reshapes_row_major(tmp_path):
    rho = np.arange(24, dtype=float).reshape(6, 4) + 1.0
    f = write_field(tmp_path / "f.csv", rho=rho)
    snap = read_field(f)
    assert (snap.ni, snap.nj) == (6, 4)
    assert np.array_equal(snap["rho"], rho)
    assert np.allclose(snap["x"][:, 0], np.arange(6) + 0.5)


def test_read_field_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_field(p)


def test_sidecar_required(tmp_path):
    f = write_field(tmp_path / "f.csv")
    with pytest.raises(FileNotFoundError):
        plot_contours(f, tmp_path / "out.png")


def test_sidecar_parsing(tmp_path):
    s = write_sidecar(tmp_path / "f.contours.json", levels=27, vmin=2.0, vmax=8.7)
    levels = read_contour_sidecar(s)
    assert levels.count == 27
    vals = levels.values()
    assert len(vals) == 27
    assert vals[0] == 2.0 and vals[-1] == 8.7


def test_residual_reader_and_empty_rejection(tmp_path):
    h = write_history(tmp_path / "h.csv", [1.0, 0.1, 0.01])
    iters, times, values = read_residual_history(h)
    assert list(iters) == [1, 2, 3]
    empty = tmp_path / "empty.csv"
    empty.write_text("iteration,time,density_residual_l2\n")
    with pytest.raises(ValueError):
        read_residual_history(empty)


def test_trace_reader(tmp_path):
    t = write_trace(tmp_path / "t.csv", [0.1, 0.05], [0.2, 0.1], [1.0, 0.5], [-0.5, -0.25])
    trace = read_trace(t)
    assert trace.meta["family"] == "hlle"
    assert trace.v[0] == 1.0
    empty = tmp_path / "e.csv"
    empty.write_text("step,rho_hat,rhou_hat,p_hat,V,delta_V\n")
    with pytest.raises(ValueError):
        read_trace(empty)


# ---------------------------------------------------------------------------
# figures


def test_contour_level_count_matches_sidecar(tmp_path):
    rho = 1.0 + 7.0 * np.random.default_rng(0).random((6, 4))
    f = write_field(tmp_path / "f.csv", rho=rho)
    write_sidecar(tmp_path / "f.contours.json", levels=30)
    cs, levels = plot_contours(f, tmp_path / "out.png")
    assert len(cs.levels) == 30
    assert (tmp_path / "out.png").stat().st_size > 0


def test_contour_uniform_field_gives_valid_empty_plot(tmp_path):
    f = write_field(tmp_path / "f.csv")  # rho = 1 everywhere, levels 1.6..7
    write_sidecar(tmp_path / "f.contours.json", levels=10)
    cs, _ = plot_contours(f, tmp_path / "flat.png")
    assert len(cs.levels) == 10
    n_vertices = sum(arr.shape[0] for seg in cs.allsegs for arr in seg)
    assert n_vertices == 0
    assert (tmp_path / "flat.png").stat().st_size > 0


def test_contour_explicit_sidecar_path(tmp_path):
    f = write_field(tmp_path / "f.csv")
    s = write_sidecar(tmp_path / "other.json", levels=5)
    cs, _ = plot_contours(f, tmp_path / "out.png", sidecar_path=s)
    assert len(cs.levels) == 5


def test_phase_portrait_single_and_mismatched(tmp_path):
    a = write_trace(tmp_path / "a.csv", [0.1, 0.05], [0.2, 0.1], [1, 0.5], [-0.5, -0.2])
    fig, traces = plot_phase_portrait([a], tmp_path / "one.png")
    assert len(traces) == 1
    b = write_trace(tmp_path / "b.csv", [0.1, 0.2], [0.2, 0.3], [1, 2], [1, 1],
                    base={"nu": 0.2})
    with pytest.raises(ValueError, match="base states"):
        plot_phase_portrait([a, b], tmp_path / "two.png")


def test_residual_overlay_legend(tmp_path):
    h1 = write_history(tmp_path / "one.csv", np.geomspace(1, 1e-9, 40))
    h2 = write_history(tmp_path / "two.csv", np.geomspace(1, 1e-2, 40))
    fig, parsed = plot_residuals([h1, h2], tmp_path / "res.png")
    assert len(parsed) == 2
    legend = fig.axes[0].get_legend()
    assert len(legend.get_texts()) == 2
    with pytest.raises(ValueError):
        plot_residuals([], tmp_path / "none.png")


def test_plot_jobs_leave_inputs_untouched(tmp_path):
    rho = 1.0 + 7.0 * np.random.default_rng(1).random((6, 4))
    f = write_field(tmp_path / "f.csv", rho=rho)
    s = write_sidecar(tmp_path / "f.contours.json")
    before = {p: hashlib.sha256(p.read_bytes()).hexdigest() for p in (f, s)}
    plot_contours(f, tmp_path / "out.png")
    after = {p: hashlib.sha256(p.read_bytes()).hexdigest() for p in (f, s)}
    assert before == after
