"""Scenario configuration: JSON schema, parsing, validation, round-trip.

Complex numbers are [re, im] pairs; geometry is explicit vertex lists
(outermost layer first for nests).  Parsing is strict: unknown medium
kinds, malformed vertices, or non-finite numbers are reported with the
offending field path.
"""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from ..geometry import CellPartition, NestPartition, Polygon
from ..medium import CellMedium, IncidentField, NestMedium

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class MeshSpec:
    nodes_per_edge: int = 32
    grading: float = 3.0


@dataclass(frozen=True)
class Scenario:
    medium: NestMedium | CellMedium
    incident: IncidentField
    mesh: MeshSpec
    num_angles: int = 256
    raw: dict = field(default_factory=dict)

    def digest(self):
        return hashlib.sha256(
            json.dumps(self.raw, sort_keys=True).encode()
        ).hexdigest()[:16]


def _cplx(node, path):
    if isinstance(node, (int, float)):
        return complex(node)
    if (isinstance(node, (list, tuple)) and len(node) == 2
            and all(isinstance(v, (int, float)) for v in node)):
        return complex(node[0], node[1])
    raise ConfigError(path, f"expected a number or [re, im] pair, got {node!r}")


def _vertices(node, path):
    try:
        arr = np.asarray(node, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, f"not a vertex list: {exc}") from None
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 3:
        raise ConfigError(path, "expected [[x, y], ...] with at least 3 vertices")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(path, "vertices must be finite")
    return arr


def parse_medium(node, path="medium"):
    kind = node.get("kind")
    if kind == "nest":
        layers = node.get("layers")
        if not isinstance(layers, list) or not layers:
            raise ConfigError(f"{path}.layers", "expected a non-empty list of polygons")
        polys = [Polygon(_vertices(v, f"{path}.layers[{i}]")) for i, v in enumerate(layers)]
        part = NestPartition(polys)
        q = [_cplx(v, f"{path}.q[{i}]") for i, v in enumerate(node.get("q", []))]
        lam = [_cplx(v, f"{path}.lambda[{i}]") for i, v in enumerate(node.get("lambda", []))]
        k = node.get("k")
        try:
            return NestMedium(part, q, lam, k)
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from None
    if kind == "cell":
        hull = Polygon(_vertices(node.get("hull"), f"{path}.hull"))
        cells_node = node.get("cells")
        if not isinstance(cells_node, list) or not cells_node:
            raise ConfigError(f"{path}.cells", "expected a non-empty list of polygons")
        cells = [Polygon(_vertices(v, f"{path}.cells[{i}]")) for i, v in enumerate(cells_node)]
        part = CellPartition(cells, hull)
        q = [_cplx(v, f"{path}.q[{i}]") for i, v in enumerate(node.get("q", []))]
        lam = _cplx(node.get("lambda_star", 0.0), f"{path}.lambda_star")
        try:
            return CellMedium(part, q, lam, node.get("k"))
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.kind", f"unknown medium kind {kind!r} (nest | cell)")


def parse_incident(node, path="incident"):
    kind = node.get("kind", "plane")
    amp = _cplx(node.get("amplitude", 1.0), f"{path}.amplitude")
    try:
        if kind == "plane":
            return IncidentField("plane", direction=node.get("direction"), amplitude=amp)
        if kind == "point":
            return IncidentField("point", location=node.get("location"), amplitude=amp)
        if kind == "none":
            return IncidentField("none", amplitude=amp)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.kind", f"unknown incident kind {kind!r}")


def parse_scenario(doc, path="") -> Scenario:
    if not isinstance(doc, dict):
        raise ConfigError(path or "<root>", "configuration must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    if "medium" not in doc:
        raise ConfigError("medium", "missing section")
    medium = parse_medium(doc["medium"])
    incident = parse_incident(doc.get("incident", {"kind": "none"}))
    mesh_node = doc.get("mesh", {})
    mesh = MeshSpec(int(mesh_node.get("nodes_per_edge", 32)),
                    float(mesh_node.get("grading", 3.0)))
    if mesh.grading < 2:
        raise ConfigError("mesh.grading", "grading exponent must be >= 2")
    num_angles = int(doc.get("farfield", {}).get("num_angles", 256))
    if num_angles < 2:
        raise ConfigError("farfield.num_angles", "need at least 2 angles")
    return Scenario(medium, incident, mesh, num_angles, raw=doc)


def load_scenario(path) -> Scenario:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"JSON parse error at line {exc.lineno}, "
                                         f"column {exc.colno}: {exc.msg}") from None
    return parse_scenario(doc)


def _poly_to_list(poly: Polygon):
    return [[float(x), float(y)] for x, y in poly.vertices]


def scenario_to_doc(sc: Scenario) -> dict:
    """Serialize back to the config format; parse(serialize(x)) is exact."""
    m = sc.medium
    if isinstance(m, NestMedium):
        med = {
            "kind": "nest",
            "layers": [_poly_to_list(p) for p in m.partition.layers],
            "q": [[z.real, z.imag] for z in m.q],
            "lambda": [[z.real, z.imag] for z in m.lam],
            "k": m.k,
        }
    else:
        med = {
            "kind": "cell",
            "hull": _poly_to_list(m.partition.hull),
            "cells": [_poly_to_list(p) for p in m.partition.cells],
            "q": [[z.real, z.imag] for z in m.q],
            "lambda_star": [m.lambda_star.real, m.lambda_star.imag],
            "k": m.k,
        }
    inc = {"kind": sc.incident.kind,
           "amplitude": [sc.incident.amplitude.real, sc.incident.amplitude.imag]}
    if sc.incident.kind == "plane":
        inc["direction"] = [float(v) for v in sc.incident.direction]
    elif sc.incident.kind == "point":
        inc["location"] = [float(v) for v in sc.incident.location]
    return {
        "schema_version": SCHEMA_VERSION,
        "medium": med,
        "incident": inc,
        "mesh": {"nodes_per_edge": sc.mesh.nodes_per_edge, "grading": sc.mesh.grading},
        "farfield": {"num_angles": sc.num_angles},
    }
