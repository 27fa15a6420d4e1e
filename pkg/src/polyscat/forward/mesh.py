"""Panelized polygon boundaries with algebraic grading toward corners.

Each polygon edge is split into panels whose width decreases like
(distance to the corner)^p toward both endpoints; Gauss-Legendre nodes
live strictly inside panels, so collocation never hits a corner.  Normals
point out of the polygon (from the enclosed region toward the surrounding
one).
"""

from dataclasses import dataclass

import numpy as np

from ..geometry import Polygon
from ..quadrature import gauss_legendre


@dataclass(frozen=True)
class Panel:
    a: np.ndarray
    b: np.ndarray
    nodes: np.ndarray      # (m, 2)
    weights: np.ndarray    # (m,) includes the length jacobian
    t_nodes: np.ndarray    # (m,) GL nodes in [-1, 1]
    normal: np.ndarray     # (2,) outward, constant on a straight panel
    length: float
    curve: int
    start: int             # global node offset within the curve


class CurveMesh:
    """All panels of one closed polygon, with concatenated node arrays."""

    def __init__(self, poly: Polygon, nodes_per_edge, grading, curve_index=0, n_gl=None):
        if grading < 2:
            raise ValueError("grading exponent must be >= 2")
        if n_gl is None:
            n_gl = 8 if nodes_per_edge >= 16 else max(3, nodes_per_edge // 2)
        panels_per_edge = max(2, int(round(nodes_per_edge / n_gl)))
        if panels_per_edge % 2:
            panels_per_edge += 1
        half = panels_per_edge // 2
        frac = 0.5 * (np.arange(half + 1) / half) ** grading
        breaks = np.concatenate([frac, 1.0 - frac[-2::-1]])

        tg, wg = gauss_legendre(n_gl)
        panels = []
        offset = 0
        v = poly.vertices
        n = len(v)
        for e in range(n):
            a_e, b_e = v[e], v[(e + 1) % n]
            tang = b_e - a_e
            elen = float(np.hypot(*tang))
            normal = np.array([tang[1], -tang[0]]) / elen
            for i in range(panels_per_edge):
                pa = a_e + breaks[i] * tang
                pb = a_e + breaks[i + 1] * tang
                plen = elen * (breaks[i + 1] - breaks[i])
                mid = 0.5 * (pa + pb)
                halfvec = 0.5 * (pb - pa)
                nodes = mid[None, :] + tg[:, None] * halfvec[None, :]
                weights = 0.5 * plen * wg
                panels.append(
                    Panel(pa, pb, nodes, weights, tg, normal, plen, curve_index, offset)
                )
                offset += n_gl
        self.poly = poly
        self.panels = panels
        self.n_gl = n_gl
        self.curve_index = curve_index
        self.nodes = np.concatenate([p.nodes for p in panels])
        self.weights = np.concatenate([p.weights for p in panels])
        self.normals = np.concatenate([np.tile(p.normal, (len(p.weights), 1)) for p in panels])
        self.n_nodes = len(self.weights)

    def panel_of_node(self, i):
        return self.panels[i // self.n_gl]


@dataclass(frozen=True)
class BoundaryMesh:
    """Meshes of every interface of a medium, outermost first."""

    curves: tuple
    nodes_per_edge: int
    grading: float

    @property
    def n_curves(self):
        return len(self.curves)


def build_mesh(polygons, nodes_per_edge, grading=3.0):
    curves = tuple(
        CurveMesh(p, nodes_per_edge, grading, curve_index=i) for i, p in enumerate(polygons)
    )
    return BoundaryMesh(curves, nodes_per_edge, grading)
