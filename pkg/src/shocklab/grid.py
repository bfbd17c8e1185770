"""Structured quadrilateral mesh with per-face frames and per-cell areas.

Index conventions used throughout the solver:

* cells are addressed ``(i, j)`` with ``0 <= i < ni``, ``0 <= j < nj``;
* vertices form an ``(ni+1, nj+1, 2)`` array;
* an *i-face* ``(i, j)`` separates cells ``(i-1, j)`` and ``(i, j)`` and its
  unit normal points toward increasing i;
* a *j-face* ``(i, j)`` separates cells ``(i, j-1)`` and ``(i, j)`` and its
  unit normal points toward increasing j.

With these conventions the same physical face seen from the two adjacent
cells automatically carries opposite outward normals.  Cells may be blanked
(``active = False``) to cut solid regions out of the logical rectangle; faces
between active and blanked cells behave as solid walls in the solver.
"""

from __future__ import annotations

import numpy as np


class StructuredGrid:
    def __init__(self, vertices: np.ndarray, active: np.ndarray | None = None):
        vertices = np.asarray(vertices, dtype=float)
        if vertices.ndim != 3 or vertices.shape[2] != 2 or min(vertices.shape[:2]) < 2:
            raise ValueError("vertices must have shape (ni+1, nj+1, 2) with ni, nj >= 1")
        self.vertices = vertices
        self.ni = vertices.shape[0] - 1
        self.nj = vertices.shape[1] - 1
        if active is None:
            active = np.ones((self.ni, self.nj), dtype=bool)
        self.active = np.asarray(active, dtype=bool)
        if self.active.shape != (self.ni, self.nj):
            raise ValueError("active mask shape must match the cell counts")

        x = vertices[:, :, 0]
        y = vertices[:, :, 1]

        # cell areas by the shoelace formula over the quad corners
        x00, y00 = x[:-1, :-1], y[:-1, :-1]
        x10, y10 = x[1:, :-1], y[1:, :-1]
        x11, y11 = x[1:, 1:], y[1:, 1:]
        x01, y01 = x[:-1, 1:], y[:-1, 1:]
        self.area = 0.5 * ((x11 - x00) * (y01 - y10) - (x01 - x10) * (y11 - y00))
        if not np.all(self.area > 0.0):
            raise ValueError("grid contains non-positive cell areas (inverted cells)")
        self.centers = np.stack(
            [0.25 * (x00 + x10 + x11 + x01), 0.25 * (y00 + y10 + y11 + y01)], axis=-1
        )

        # i-faces: edge from vertex (i, j) to (i, j+1); normal toward +i
        tx = x[:, 1:] - x[:, :-1]
        ty = y[:, 1:] - y[:, :-1]
        self.iface_len = np.hypot(tx, ty)
        self.iface_nx = ty / self.iface_len
        self.iface_ny = -tx / self.iface_len

        # j-faces: edge from vertex (i, j) to (i+1, j); normal toward +j
        tx = x[1:, :] - x[:-1, :]
        ty = y[1:, :] - y[:-1, :]
        self.jface_len = np.hypot(tx, ty)
        self.jface_nx = -ty / self.jface_len
        self.jface_ny = tx / self.jface_len

    @classmethod
    def cartesian(cls, ni: int, nj: int, x_range=(0.0, 1.0), y_range=(0.0, 1.0),
                  active: np.ndarray | None = None) -> "StructuredGrid":
        """Uniform rectangular grid over the given extents."""
        xs = np.linspace(x_range[0], x_range[1], ni + 1)
        ys = np.linspace(y_range[0], y_range[1], nj + 1)
        vx, vy = np.meshgrid(xs, ys, indexing="ij")
        return cls(np.stack([vx, vy], axis=-1), active)

    def face_closure_error(self) -> float:
        """Max over cells of |sum of outward normal*length|; zero for any
        straight-edged quad mesh up to round-off."""
        sx = (
            self.iface_nx[1:, :] * self.iface_len[1:, :]
            - self.iface_nx[:-1, :] * self.iface_len[:-1, :]
            + self.jface_nx[:, 1:] * self.jface_len[:, 1:]
            - self.jface_nx[:, :-1] * self.jface_len[:, :-1]
        )
        sy = (
            self.iface_ny[1:, :] * self.iface_len[1:, :]
            - self.iface_ny[:-1, :] * self.iface_len[:-1, :]
            + self.jface_ny[:, 1:] * self.jface_len[:, 1:]
            - self.jface_ny[:, :-1] * self.jface_len[:, :-1]
        )
        return float(np.max(np.hypot(sx, sy)))

    def transposed(self) -> "StructuredGrid":
        """Grid with the roles of i/x and j/y exchanged."""
        verts = self.vertices.transpose(1, 0, 2)[:, :, ::-1].copy()
        return StructuredGrid(verts, self.active.T.copy())
