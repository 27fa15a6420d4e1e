"""Helmholtz layer-potential operator blocks on panelized polygons.

Kernels (outgoing fundamental solution G = (i/4) H0^(1)(kappa r)):
    S   single-layer value
    K   double-layer value          (normal derivative at the source)
    Kp  single-layer normal deriv   (normal derivative at the target)
    T   double-layer normal deriv

Every kind accepts an optional second wavenumber kappa2, in which case the
assembled operator is the kernel difference op(kappa) - op(kappa2).  The
difference is what transmission formulations need on a shared interface:
for T it removes the hypersingular part entirely, leaving a logarithmic
kernel that plain graded subdivision integrates; for the others it is
assembled with a series-stabilized form of kappa H1(kappa r) near r = 0 to
avoid catastrophic cancellation.

Near interactions (target within a few panel lengths of a source panel,
including the panel containing the target) are re-integrated on panels
geometrically subdivided toward the closest point, with the density
carried by barycentric Lagrange interpolation from the panel's own nodes.
"""

import numpy as np
from scipy.special import hankel1, jv

from ..quadrature import gauss_legendre

_EULER = 0.5772156649015328606
NEAR_MULT = 1.5
_FINE_N = 10
_FINE_LEVELS = 16
_FINE_RATIO = 0.35


def _kh1(kappa, r):
    """kappa * H1^(1)(kappa r), vectorized, complex-safe."""
    return kappa * hankel1(1, kappa * r)


def _kh1_reg(kappa, r):
    """kappa H1^(1)(kappa r) + 2i/(pi r): the part regular at r = 0.

    Direct subtraction below |kappa| r ~ 1e-3 loses most digits; there a
    five-term ascending series is used instead.
    """
    z = kappa * r
    small = np.abs(z) < 1e-3
    out = np.empty(np.broadcast(z, r).shape, dtype=complex)
    zs = np.broadcast_to(z, out.shape)
    rs = np.broadcast_to(r, out.shape)
    if np.any(~small):
        zb = zs[~small]
        out[~small] = kappa * hankel1(1, zb) + 2j / (np.pi * rs[~small])
    if np.any(small):
        zb = zs[small]
        rb = rs[small]
        j1 = jv(1, zb)
        logz = np.log(zb / 2.0)
        series = (kappa * j1) * (1.0 + 2j / np.pi * logz) - (
            1j * kappa * zb / (2.0 * np.pi)
        ) * ((1.0 - 2 * _EULER) - (2.5 - 2 * _EULER) * zb**2 / 8.0)
        out[small] = series + 0j * rb
    return out


def _kernel(kind, kappa, kappa2, diff, r, src_nrm, tgt_nrm):
    """Pointwise kernel values; diff = x - y with shape (..., 2)."""
    rhat_dot_sn = (diff[..., 0] * src_nrm[..., 0] + diff[..., 1] * src_nrm[..., 1]) / r
    if kind == "S":
        vals = 0.25j * hankel1(0, kappa * r)
        if kappa2 is not None:
            vals = vals - 0.25j * hankel1(0, kappa2 * r)
        return vals
    if kind == "K":
        if kappa2 is None:
            return 0.25j * _kh1(kappa, r) * rhat_dot_sn
        return 0.25j * (_kh1_reg(kappa, r) - _kh1_reg(kappa2, r)) * rhat_dot_sn
    if kind == "Kp":
        rhat_dot_tn = (diff[..., 0] * tgt_nrm[..., 0] + diff[..., 1] * tgt_nrm[..., 1]) / r
        if kappa2 is None:
            return -0.25j * _kh1(kappa, r) * rhat_dot_tn
        return -0.25j * (_kh1_reg(kappa, r) - _kh1_reg(kappa2, r)) * rhat_dot_tn
    if kind == "T":
        rhat_dot_tn = (diff[..., 0] * tgt_nrm[..., 0] + diff[..., 1] * tgt_nrm[..., 1]) / r
        nn = src_nrm[..., 0] * tgt_nrm[..., 0] + src_nrm[..., 1] * tgt_nrm[..., 1]
        ang = nn - 2.0 * rhat_dot_sn * rhat_dot_tn
        if kappa2 is None:
            h0 = 0.25j * kappa**2 * hankel1(0, kappa * r)
            h1r = 0.25j * _kh1(kappa, r) / r
        else:
            h0 = 0.25j * (kappa**2 * hankel1(0, kappa * r) - kappa2**2 * hankel1(0, kappa2 * r))
            h1r = 0.25j * (_kh1_reg(kappa, r) - _kh1_reg(kappa2, r)) / r
        # sign: rhat here is (x-y)/r; both dot products flip, their product does not
        return h0 * rhat_dot_sn * rhat_dot_tn + h1r * ang
    raise ValueError(f"unknown kernel kind {kind!r}")


def _bary_weights(t_nodes):
    n = len(t_nodes)
    w = np.ones(n)
    for j in range(n):
        for k in range(n):
            if k != j:
                w[j] /= t_nodes[j] - t_nodes[k]
    return w


def _lagrange_matrix(t_nodes, t_eval):
    """L[e, j]: value of the j-th Lagrange basis (nodes t_nodes) at t_eval[e]."""
    w = _bary_weights(t_nodes)
    diff = t_eval[:, None] - t_nodes[None, :]
    exact = np.isclose(diff, 0.0, atol=1e-15)
    diff = np.where(exact, 1.0, diff)
    terms = w[None, :] / diff
    denom = terms.sum(axis=1)
    L = terms / denom[:, None]
    L[np.any(exact, axis=1)] = exact[np.any(exact, axis=1)].astype(float)
    return L


def _fine_subdivision(t_star):
    """Panel params in [-1,1] geometrically refined toward t_star; nodes+weights."""
    tg, wg = gauss_legendre(_FINE_N)
    pts = []
    wts = []
    for lo, hi in ((-1.0, t_star), (t_star, 1.0)):
        span = hi - lo
        if span < 1e-14:
            continue
        # breakpoints accumulate toward the t_star end
        fracs = _FINE_RATIO ** np.arange(_FINE_LEVELS, -1, -1.0)
        if lo == t_star:
            brk = np.concatenate(([lo], lo + span * fracs))
        else:
            brk = np.concatenate((hi - span * fracs[::-1], [hi]))
        for i in range(len(brk) - 1):
            mid, half = 0.5 * (brk[i] + brk[i + 1]), 0.5 * (brk[i + 1] - brk[i])
            if half <= 0:
                continue
            pts.append(mid + half * tg)
            wts.append(half * wg)
    return np.concatenate(pts), np.concatenate(wts)


def _near_row_block(kind, kappa, kappa2, x, tn, panel):
    """Quadrature row for one target against one nearby straight panel."""
    ab = panel.b - panel.a
    L2 = float(ab @ ab)
    t_star = float(np.clip(2.0 * ((x - panel.a) @ ab) / L2 - 1.0, -1.0, 1.0))
    tf, wf = _fine_subdivision(t_star)
    mid = 0.5 * (panel.a + panel.b)
    y = mid[None, :] + 0.5 * tf[:, None] * ab[None, :]
    d = x[None, :] - y
    r = np.hypot(d[:, 0], d[:, 1])
    keep = r > 1e-15 * max(1.0, np.sqrt(L2))
    sn = np.broadcast_to(panel.normal, y.shape)
    tnb = None if tn is None else np.broadcast_to(tn, y.shape)
    vals = np.zeros(len(tf), dtype=complex)
    vals[keep] = _kernel(kind, kappa, kappa2, d[keep], r[keep], sn[keep],
                         None if tnb is None else tnb[keep])
    jac = 0.5 * panel.length
    Lmat = _lagrange_matrix(panel.t_nodes, tf)
    return (wf * jac * vals) @ Lmat


def assemble_block(kind, kappa, src, tgt_pts, tgt_nrm=None, kappa2=None, near=True,
                   exclude_self_node=False):
    """Dense operator block mapping a density on `src` (CurveMesh) to values
    at `tgt_pts`; weights are folded in, so block @ density ~ integral."""
    tgt_pts = np.atleast_2d(np.asarray(tgt_pts, dtype=float))
    nt = len(tgt_pts)
    ns = src.n_nodes
    out = np.empty((nt, ns), dtype=complex)
    chunk = max(1, int(2e6) // max(ns, 1))
    for i0 in range(0, nt, chunk):
        i1 = min(nt, i0 + chunk)
        d = tgt_pts[i0:i1, None, :] - src.nodes[None, :, :]
        r = np.hypot(d[..., 0], d[..., 1])
        r = np.where(r == 0.0, 1.0, r)  # self nodes fixed below by near pass
        sn = np.broadcast_to(src.normals[None, :, :], d.shape)
        tn = None
        if tgt_nrm is not None:
            tn = np.broadcast_to(np.asarray(tgt_nrm)[i0:i1, None, :], d.shape)
        out[i0:i1] = _kernel(kind, kappa, kappa2, d, r, sn, tn) * src.weights[None, :]
    if near:
        _fix_near(kind, kappa, kappa2, src, tgt_pts, tgt_nrm, out)
    return out


def _fix_near(kind, kappa, kappa2, src, tgt_pts, tgt_nrm, out):
    n_gl = src.n_gl
    for p in src.panels:
        ab = p.b - p.a
        L2 = float(ab @ ab)
        t = np.clip(((tgt_pts - p.a) @ ab) / L2, 0.0, 1.0)
        proj = p.a[None, :] + t[:, None] * ab[None, :]
        dist = np.hypot(*(tgt_pts - proj).T)
        near_idx = np.nonzero(dist < NEAR_MULT * p.length)[0]
        cols = slice(p.start, p.start + n_gl)
        for i in near_idx:
            tn = None if tgt_nrm is None else np.asarray(tgt_nrm)[i]
            out[i, cols] = _near_row_block(kind, kappa, kappa2, tgt_pts[i], tn, p)


def farfield_row(src, k, directions):
    """Far-field kernels for single and double layer densities on `src`.

    Returns (FS, FD): far-field pattern = FS @ psi + FD @ phi for densities
    in the representation D phi + S psi with exterior wavenumber k, in the
    convention u_s ~ e^{ikr} r^{-1/2} uinf(xhat).
    """
    directions = np.atleast_2d(directions)
    c = np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * k)
    phase = np.exp(-1j * k * directions @ src.nodes.T)
    fs = c * phase * src.weights[None, :]
    nd = directions @ src.normals.T
    fd = fs * (-1j * k * nd)
    return fs, fd
