"""Boundary-integral solver for the conductive transmission problem on a
nested polygonal medium.

Representation (one density pair per interface): the scattered exterior
field is a combined double+single layer on the outermost interface; each
annular region uses double+single layers on its two bounding interfaces,
all with the region's own wavenumber.  Matching the Dirichlet trace and
the conductive Neumann jump
    u_out = u_in,   dnu u_out + lambda u_out = dnu u_in
at collocation nodes yields a square second-kind system whose diagonal
operators are kernel differences (weakly singular at worst).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ..geometry import locate
from ..medium import CellMedium, IncidentField, NestMedium, incident_eval
from .layerops import assemble_block, farfield_row
from .mesh import BoundaryMesh, build_mesh

COND_FLAG = 1e12
TAU_SOLVE = 1e-8


@dataclass(frozen=True)
class FarFieldPattern:
    angles: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if a.size < 2 or v.shape != a.shape:
            raise ValueError("far-field pattern needs >= 2 matching angle/value samples")
        if np.any(np.diff(a) <= 0) or a[0] < 0 or a[-1] >= 2 * np.pi:
            raise ValueError("angles must be strictly increasing in [0, 2*pi)")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "values", v)


def uniform_directions(m):
    return np.arange(m) * (2 * np.pi / m)


def region_wavenumbers(medium: NestMedium):
    """Exterior k followed by k sqrt(q_ell), principal branch, Im >= 0."""
    ks = [complex(medium.k)]
    for q in medium.q:
        root = np.sqrt(complex(q))
        if root.imag < 0:
            root = -root
        ks.append(medium.k * root)
    return ks


@dataclass
class NestSolveResult:
    densities: tuple          # (phi_ell, psi_ell) per interface
    residual: float
    cond_estimate: float
    converged: bool
    mesh: BoundaryMesh
    kappas: list
    medium: NestMedium
    incident: IncidentField

    def far_field(self, angles):
        k = self.medium.k
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
        fs, fd = farfield_row(self.mesh.curves[0], k, dirs)
        phi1, psi1 = self.densities[0]
        return FarFieldPattern(np.asarray(angles, float), fd @ phi1 + fs @ psi1)

    def field_at(self, pts, region=None):
        """Total field at points; `region` pins the representation used.

        Unpinned evaluation refuses interface points (the value is not
        single-valued there).  Pinning a region evaluates that region's
        layer representation everywhere it makes sense, including on the
        region's own boundary, where the double-layer principal value
        yields the average of the two one-sided limits; since the
        Dirichlet trace is continuous across every interface, that average
        is the physical boundary value of the total field.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.empty(len(pts), dtype=complex)
        part = self.medium.partition
        n = part.n_layers
        if region is not None:
            regions = np.full(len(pts), int(region))
        else:
            labels = [locate(part, p) for p in pts]
            if any(lb.kind == "interface" for lb in labels):
                raise ValueError("field evaluation on an interface is not defined")
            regions = np.array([0 if lb.kind == "exterior" else lb.index for lb in labels])
        for reg in np.unique(regions):
            sel = np.nonzero(regions == reg)[0]
            sub = pts[sel]
            kap = self.kappas[reg]
            val = np.zeros(len(sub), dtype=complex)
            touching = []
            if reg == 0:
                touching = [0]
                vi, _ = incident_eval(self.incident, self.medium.k, sub)
                val += vi
            elif reg < n:
                touching = [reg - 1, reg]
            else:
                touching = [n - 1]
            for ci in touching:
                phi, psi = self.densities[ci]
                kb = assemble_block("K", kap, self.mesh.curves[ci], sub)
                sb = assemble_block("S", kap, self.mesh.curves[ci], sub)
                val += kb @ phi + sb @ psi
            out[sel] = val
        return out if len(out) > 1 else complex(out[0])


def solve_scatter(medium, inc: IncidentField, mesh: BoundaryMesh = None,
                  nodes_per_edge=32, grading=3.0):
    """Solve the forward conductive scattering problem.

    Dispatches on the medium type; nest media use the layered combined
    representation, cell media the single-trace formulation.
    """
    if isinstance(medium, CellMedium):
        from .cellsolver import solve_cell

        return solve_cell(medium, inc, nodes_per_edge=nodes_per_edge, grading=grading,
                          mesh_segments=mesh)
    if not isinstance(medium, NestMedium):
        raise TypeError(f"unsupported medium type {type(medium)!r}")
    if mesh is None:
        mesh = build_mesh([layer for layer in medium.partition.layers], nodes_per_edge, grading)
    inc.validate_against(medium.partition.layers[0])
    system = assemble_nest(medium, mesh)
    return solve_assembled(system, inc)


def assemble_nest(medium: NestMedium, mesh: BoundaryMesh):
    """Build and factor the block system once; reusable across incident fields."""
    n = medium.partition.n_layers
    if mesh.n_curves != n:
        raise ValueError("mesh does not match the number of interfaces")
    kappas = region_wavenumbers(medium)
    sizes = [c.n_nodes for c in mesh.curves]
    col0 = np.cumsum([0] + [2 * s for s in sizes])
    row0 = col0
    ntot = col0[-1]
    A = np.zeros((ntot, ntot), dtype=complex)

    for i in range(n):
        tgt = mesh.curves[i]
        x, tn = tgt.nodes, tgt.normals
        m = sizes[i]
        kout, kin = kappas[i], kappas[i + 1]
        lam = medium.lam[i]
        rd = slice(row0[i], row0[i] + m)          # Dirichlet rows
        rn = slice(row0[i] + m, row0[i] + 2 * m)  # Neumann rows

        cph = slice(col0[i], col0[i] + m)
        cps = slice(col0[i] + m, col0[i] + 2 * m)
        eye = np.eye(m)
        kd = assemble_block("K", kout, tgt, x, kappa2=kin)
        sd = assemble_block("S", kout, tgt, x, kappa2=kin)
        td = assemble_block("T", kout, tgt, x, tgt_nrm=tn, kappa2=kin)
        kpd = assemble_block("Kp", kout, tgt, x, tgt_nrm=tn, kappa2=kin)
        A[rd, cph] = eye + kd
        A[rd, cps] = sd
        A[rn, cph] = td
        A[rn, cps] = -eye + kpd
        if lam != 0:
            ko = assemble_block("K", kout, tgt, x)
            so = assemble_block("S", kout, tgt, x)
            A[rn, cph] += lam * (0.5 * eye + ko)
            A[rn, cps] += lam * so

        if i >= 1:
            src = mesh.curves[i - 1]
            co_ph = slice(col0[i - 1], col0[i - 1] + sizes[i - 1])
            co_ps = slice(col0[i - 1] + sizes[i - 1], col0[i - 1] + 2 * sizes[i - 1])
            kv = assemble_block("K", kout, src, x)
            sv = assemble_block("S", kout, src, x)
            tv = assemble_block("T", kout, src, x, tgt_nrm=tn)
            kpv = assemble_block("Kp", kout, src, x, tgt_nrm=tn)
            A[rd, co_ph] += kv
            A[rd, co_ps] += sv
            A[rn, co_ph] += tv + lam * kv
            A[rn, co_ps] += kpv + lam * sv
        if i <= n - 2:
            src = mesh.curves[i + 1]
            ci_ph = slice(col0[i + 1], col0[i + 1] + sizes[i + 1])
            ci_ps = slice(col0[i + 1] + sizes[i + 1], col0[i + 1] + 2 * sizes[i + 1])
            kv = assemble_block("K", kin, src, x)
            sv = assemble_block("S", kin, src, x)
            tv = assemble_block("T", kin, src, x, tgt_nrm=tn)
            kpv = assemble_block("Kp", kin, src, x, tgt_nrm=tn)
            A[rd, ci_ph] -= kv
            A[rd, ci_ps] -= sv
            A[rn, ci_ph] -= tv
            A[rn, ci_ps] -= kpv

    anorm = np.linalg.norm(A, 1)
    lu, piv = sla.lu_factor(A)
    gecon = sla.get_lapack_funcs("gecon", (A,))
    rcond, _ = gecon(lu, anorm)
    cond = np.inf if rcond == 0 else 1.0 / rcond
    return {
        "A": A, "lu": (lu, piv), "cond": cond, "mesh": mesh, "kappas": kappas,
        "medium": medium, "sizes": sizes, "col0": col0,
    }


def solve_assembled(system, inc: IncidentField):
    medium = system["medium"]
    mesh = system["mesh"]
    sizes = system["sizes"]
    n = len(sizes)
    b = np.zeros(system["A"].shape[0], dtype=complex)
    tgt = mesh.curves[0]
    ui, gi = incident_eval(inc, medium.k, tgt.nodes)
    lam1 = medium.lam[0]
    m = sizes[0]
    b[:m] = -ui
    b[m:2 * m] = -((gi * tgt.normals).sum(axis=1) + lam1 * ui)

    z = sla.lu_solve(system["lu"], b)
    resid = float(np.linalg.norm(system["A"] @ z - b) / max(np.linalg.norm(b), 1e-300))
    densities = []
    col0 = system["col0"]
    for i in range(n):
        densities.append((z[col0[i]:col0[i] + sizes[i]],
                          z[col0[i] + sizes[i]:col0[i] + 2 * sizes[i]]))
    converged = resid <= TAU_SOLVE and system["cond"] < COND_FLAG
    return NestSolveResult(tuple(densities), resid, system["cond"], converged,
                           mesh, system["kappas"], medium, inc)


def total_field_at(medium, inc, result, x):
    """Total field at x: incident + scattered outside, region field inside."""
    return result.field_at(x)


def far_field(medium, inc, result, angles):
    """Far-field pattern of the scattered field at the given angles."""
    return result.far_field(np.asarray(angles, dtype=float))


def farfield_diff(p1: FarFieldPattern, p2: FarFieldPattern, eps=1e-300):
    """Relative L2 distance of two patterns on the same angular grid."""
    if p1.angles.shape != p2.angles.shape or not np.allclose(p1.angles, p2.angles):
        raise ValueError("far-field patterns live on different angular grids")
    num = np.linalg.norm(p1.values - p2.values)
    den = max(np.linalg.norm(p1.values), eps)
    return float(num / den)
