"""Polygonal geometry: simple polygons, nested and cell partitions, corner
sectors at vertices, and point location.

All types are immutable after construction.  Partition validation returns
reports rather than raising: a malformed nest/cell layout is data to
inspect, not a programming fault.  Polygons themselves must at least be
simple with positive area, or nothing downstream is meaningful.
"""

import math
from dataclasses import dataclass, field

import numpy as np

REL_GEO_TOL = 1e-12  # interface tolerance, relative to the bounding-box diagonal


def _as_vertices(vertices):
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
        raise ValueError("polygon needs an (n,2) array of at least 3 vertices")
    return v


def signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross2(a, b):
    return float(a[0] * b[1] - a[1] * b[0])


def _segments_properly_intersect(p1, p2, q1, q2, eps):
    """True if open segments cross or overlap (shared endpoints excluded)."""
    d1 = _cross2(q2 - q1, p1 - q1)
    d2 = _cross2(q2 - q1, p2 - q1)
    d3 = _cross2(p2 - p1, q1 - p1)
    d4 = _cross2(p2 - p1, q2 - p1)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and (
        (d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)
    ):
        return True
    return False


def point_segment_distance(pt, a, b):
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(pt - a)))
    t = float(np.clip((pt - a) @ ab / denom, 0.0, 1.0))
    proj = a + t * ab
    return float(np.hypot(*(pt - proj)))


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, stored counterclockwise; dimensionless coordinates."""

    vertices: np.ndarray

    def __init__(self, vertices):
        v = _as_vertices(vertices).copy()
        if signed_area(v) < 0:
            v = v[::-1].copy()
        object.__setattr__(self, "vertices", v)
        self._validate()
        self.vertices.setflags(write=False)

    def _validate(self):
        v = self.vertices
        n = len(v)
        scale = self.bbox_diag()
        tol = REL_GEO_TOL * scale
        if signed_area(v) <= tol * scale:
            raise ValueError("polygon area must be strictly positive")
        for i in range(n):
            if np.hypot(*(v[i] - v[(i + 1) % n])) <= tol:
                raise ValueError(f"consecutive vertices {i},{(i+1)%n} coincide")
        for i in range(n):
            a, b, c = v[i - 1], v[i], v[(i + 1) % n]
            if abs(_cross2(b - a, c - b)) <= tol * scale:
                raise ValueError(f"three consecutive vertices collinear at index {i}")
        eps = tol * scale
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_properly_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n], eps):
                    raise ValueError(f"edges {i} and {j} intersect: polygon not simple")

    def bbox_diag(self):
        v = self.vertices
        return float(np.hypot(*(v.max(axis=0) - v.min(axis=0))))

    @property
    def n_vertices(self):
        return len(self.vertices)

    def area(self):
        return signed_area(self.vertices)

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def is_convex(self):
        v = self.vertices
        n = len(v)
        cross = [_cross2(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]) for i in range(n)]
        return all(c > 0 for c in cross)

    def contains(self, pt, tol):
        """'inside' | 'outside' | 'boundary' with absolute tolerance tol."""
        pt = np.asarray(pt, dtype=float)
        v = self.vertices
        n = len(v)
        for i in range(n):
            if point_segment_distance(pt, v[i], v[(i + 1) % n]) <= tol:
                return "boundary"
        inside = False
        x, y = pt
        j = n - 1
        for i in range(n):
            xi, yi = v[i]
            xj, yj = v[j]
            if (yi > y) != (yj > y) and x < (xj - xi) * (y - yi) / (yj - yi) + xi:
                inside = not inside
            j = i
        return "inside" if inside else "outside"

    def boundary_distance(self, pt):
        v = self.vertices
        n = len(v)
        return min(point_segment_distance(np.asarray(pt, float), v[i], v[(i + 1) % n]) for i in range(n))


@dataclass(frozen=True)
class NestPartition:
    """Convex polygons listed outermost first, each strictly containing the next."""

    layers: tuple

    def __init__(self, layers):
        object.__setattr__(self, "layers", tuple(layers))
        if not self.layers:
            raise ValueError("nest partition needs at least one layer")

    @property
    def n_layers(self):
        return len(self.layers)

    def geo_tol(self):
        return REL_GEO_TOL * self.layers[0].bbox_diag()


@dataclass(frozen=True)
class CellPartition:
    """Disjoint polygonal cells tiling a hull polygon."""

    cells: tuple
    hull: Polygon

    def __init__(self, cells, hull):
        object.__setattr__(self, "cells", tuple(cells))
        object.__setattr__(self, "hull", hull)
        if not self.cells:
            raise ValueError("cell partition needs at least one cell")

    @property
    def n_cells(self):
        return len(self.cells)

    def geo_tol(self):
        return REL_GEO_TOL * self.hull.bbox_diag()


@dataclass(frozen=True)
class CornerSector:
    """Truncated sector at a polygon vertex.

    theta_m/theta_M are measured after translating the apex to the origin.
    When the interior wedge straddles the negative real axis the sector is
    stored symmetric about zero and `rotation` records the world angle of
    the sector bisector; world point = apex + R(rotation - bisector) ... in
    short, `to_world` and `to_canonical` map between frames.
    """

    apex: np.ndarray
    theta_m: float
    theta_M: float
    h: float
    rotation: float = 0.0
    degenerate: bool = field(default=False)

    def __init__(self, apex, theta_m, theta_M, h, rotation=0.0):
        if not h > 0:
            raise ValueError("sector radius h must be > 0")
        opening = theta_M - theta_m
        if not 0 < opening < 2 * math.pi:
            raise ValueError("sector opening must lie in (0, 2*pi)")
        if not (-math.pi < theta_m < theta_M <= math.pi):
            raise ValueError("sector angles must satisfy -pi < theta_m < theta_M <= pi")
        object.__setattr__(self, "apex", np.array(apex, dtype=float))
        self.apex.setflags(write=False)
        object.__setattr__(self, "theta_m", float(theta_m))
        object.__setattr__(self, "theta_M", float(theta_M))
        object.__setattr__(self, "h", float(h))
        object.__setattr__(self, "rotation", float(rotation))
        object.__setattr__(self, "degenerate", bool(abs(opening - math.pi) < 1e-12))

    @property
    def opening(self):
        return self.theta_M - self.theta_m

    @property
    def midline_world(self):
        ang = 0.5 * (self.theta_m + self.theta_M) + self.rotation
        return np.array([math.cos(ang), math.sin(ang)])

    def to_world(self, pts):
        pts = np.asarray(pts, dtype=float)
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        rot = np.array([[c, -s], [s, c]])
        return self.apex + pts @ rot.T

    def to_canonical(self, pts):
        pts = np.asarray(pts, dtype=float)
        c, s = math.cos(-self.rotation), math.sin(-self.rotation)
        rot = np.array([[c, -s], [s, c]])
        return (pts - self.apex) @ rot.T


@dataclass(frozen=True)
class RegionLabel:
    kind: str  # 'region' | 'exterior' | 'interface'
    index: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple
    info: tuple = ()


def validate_nest(p: NestPartition) -> ValidationReport:
    """Check convexity of every layer and strict nesting of consecutive layers."""
    violations = []
    tol = p.geo_tol()
    for i, layer in enumerate(p.layers, start=1):
        if not layer.is_convex():
            violations.append(f"layer {i} not convex")
    for i in range(len(p.layers) - 1):
        outer, inner = p.layers[i], p.layers[i + 1]
        bad = any(
            outer.contains(v, tol) != "inside" or outer.boundary_distance(v) <= tol
            for v in inner.vertices
        )
        if bad:
            violations.append(f"layer {i + 2} not inside layer {i + 1}")
    return ValidationReport(ok=not violations, violations=tuple(violations))


def _edge_on_hull(hull: Polygon, a, b, tol):
    for pt in (a, b, 0.5 * (a + b)):
        if hull.contains(pt, tol) != "boundary":
            return False
    return True


def validate_cell(p: CellPartition) -> ValidationReport:
    """Check tiling of the hull, pairwise disjointness, and that every cell
    owns a vertex whose two incident edges lie on the hull boundary."""
    violations = []
    info = []
    tol = p.geo_tol()
    hull = p.hull
    eps = tol * hull.bbox_diag()

    for i, cell in enumerate(p.cells, start=1):
        for v in cell.vertices:
            if hull.contains(v, tol) == "outside":
                violations.append(f"cell {i} leaves the hull")
                break

    for i in range(len(p.cells)):
        for j in range(i + 1, len(p.cells)):
            ci, cj = p.cells[i], p.cells[j]
            overlap = False
            for a, b in ci.edges():
                for c, d in cj.edges():
                    if _segments_properly_intersect(a, b, c, d, eps):
                        overlap = True
            if not overlap:
                # vertex or centroid strictly interior to the other cell
                overlap = (
                    any(cj.contains(v, tol) == "inside" for v in ci.vertices)
                    or any(ci.contains(v, tol) == "inside" for v in cj.vertices)
                    or cj.contains(ci.vertices.mean(axis=0), tol) == "inside"
                    or ci.contains(cj.vertices.mean(axis=0), tol) == "inside"
                )
            if overlap:
                violations.append(f"cells {i},{j} overlap")
            else:
                shared_pts = sum(
                    1
                    for v in ci.vertices
                    if cj.contains(v, tol) == "boundary"
                )
                if shared_pts == 1:
                    info.append(f"cells {i},{j} may touch at a single point")

    total = sum(c.area() for c in p.cells)
    if abs(total - hull.area()) > 1e-9 * hull.area():
        violations.append("cell areas do not sum to the hull area")

    for i, cell in enumerate(p.cells, start=1):
        v = cell.vertices
        n = len(v)
        has_hull_vertex = any(
            _edge_on_hull(hull, v[k], v[(k + 1) % n], tol)
            and _edge_on_hull(hull, v[k - 1], v[k], tol)
            for k in range(n)
        )
        if not has_hull_vertex:
            violations.append(f"cell {i} has no hull vertex")

    return ValidationReport(ok=not violations, violations=tuple(violations), info=tuple(info))


def max_sector_radius(poly: Polygon):
    """Largest h valid for corner_sectors: half the worst vertex clearance."""
    v = poly.vertices
    n = len(v)
    worst = np.inf
    for i in range(n):
        dmin = min(
            point_segment_distance(v[i], v[j], v[(j + 1) % n])
            for j in range(n)
            if j != i and (j + 1) % n != i
        )
        worst = min(worst, dmin)
    return 0.5 * worst


def corner_sectors(poly: Polygon, h: float):
    """One truncated sector per vertex, spanning the polygon interior.

    Angles are world angles about the translated apex when the wedge avoids
    the negative real axis; otherwise the sector is rotated to be symmetric
    about zero with the rotation recorded.  Fails if h exceeds half the
    minimum distance from a vertex to its non-incident edges.
    """
    if not h > 0:
        raise ValueError("h must be > 0")
    v = poly.vertices
    n = len(v)
    sectors = []
    for i in range(n):
        apex = v[i]
        dmin = min(
            point_segment_distance(apex, v[j], v[(j + 1) % n])
            for j in range(n)
            if j != i and (j + 1) % n != i
        )
        if h > 0.5 * dmin:
            raise ValueError(
                f"h={h} exceeds half the clearance {0.5 * dmin:.3g} of vertex {i}"
            )
        d_next = v[(i + 1) % n] - apex
        d_prev = v[i - 1] - apex
        a_next = math.atan2(d_next[1], d_next[0])
        a_prev = math.atan2(d_prev[1], d_prev[0])
        opening = (a_prev - a_next) % (2 * math.pi)
        theta_m, theta_M = a_next, a_next + opening
        if theta_M > math.pi or theta_m <= -math.pi:
            # wedge straddles the cut: store symmetric about zero
            bisector = a_next + 0.5 * opening
            sectors.append(
                CornerSector(apex, -0.5 * opening, 0.5 * opening, h, rotation=bisector)
            )
        else:
            sectors.append(CornerSector(apex, theta_m, theta_M, h, rotation=0.0))
    return sectors


def locate(partition, x, tol=None) -> RegionLabel:
    """Deterministic region label for a point.

    Nest partitions: region index ell means the annulus between layer ell
    and layer ell+1 (layer N = the innermost core).  Cell partitions:
    region index is the cell index.  Indices are 1-based.
    """
    x = np.asarray(x, dtype=float)
    if tol is None:
        tol = partition.geo_tol()
    if isinstance(partition, NestPartition):
        for ell in range(partition.n_layers, 0, -1):
            status = partition.layers[ell - 1].contains(x, tol)
            if status == "boundary":
                return RegionLabel("interface", ell)
        for ell in range(partition.n_layers, 0, -1):
            if partition.layers[ell - 1].contains(x, tol) == "inside":
                return RegionLabel("region", ell)
        return RegionLabel("exterior")
    if isinstance(partition, CellPartition):
        for i, cell in enumerate(partition.cells, start=1):
            if cell.contains(x, tol) == "boundary":
                return RegionLabel("interface", i)
        for i, cell in enumerate(partition.cells, start=1):
            if cell.contains(x, tol) == "inside":
                return RegionLabel("region", i)
        return RegionLabel("exterior")
    raise TypeError(f"unsupported partition type {type(partition)!r}")
