from .diskoracle import disk_series_oracle
from .mesh import BoundaryMesh, CurveMesh, build_mesh
from .solver import (
    FarFieldPattern,
    NestSolveResult,
    assemble_nest,
    far_field,
    farfield_diff,
    region_wavenumbers,
    solve_assembled,
    solve_scatter,
    total_field_at,
    uniform_directions,
)

__all__ = [
    "BoundaryMesh", "CurveMesh", "build_mesh", "FarFieldPattern",
    "NestSolveResult", "assemble_nest", "far_field", "farfield_diff",
    "region_wavenumbers", "solve_assembled", "solve_scatter",
    "total_field_at", "uniform_directions", "disk_series_oracle",
]
