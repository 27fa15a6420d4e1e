"""Quadrature rules for sector-domain integrals against the decaying test
function u0(s x) = exp(-sqrt(s r) e^{i theta/2}).

Radial direction: composite Gauss-Legendre on geometrically graded panels
toward r = 0 (the integrand has sqrt(r) derivative behaviour there) and out
through the exponentially decaying tail.  Angular direction: tensor
Gauss-Legendre, refined by doubling until two successive levels agree.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    converged: bool

    def __complex__(self):
        return complex(self.value)


@lru_cache(maxsize=64)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(breaks, n):
    """Composite Gauss-Legendre nodes/weights over consecutive breakpoints."""
    x, w = gauss_legendre(n)
    a = breaks[:-1]
    b = breaks[1:]
    mid = 0.5 * (a + b)[:, None]
    half = 0.5 * (b - a)[:, None]
    nodes = (mid + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def graded_breaks(r_lo, r_hi, ratio=0.5, tiny=1e-16):
    """Breakpoints from r_hi down toward r_lo (geometric when r_lo ~ 0)."""
    if r_lo > tiny * r_hi:
        # log-uniform between r_lo and r_hi
        m = max(8, int(np.ceil(np.log(r_hi / r_lo) / np.log(2.0))) * 2)
        return r_lo * (r_hi / r_lo) ** (np.arange(m + 1) / m)
    levels = int(np.ceil(np.log(tiny) / np.log(ratio)))
    pts = r_hi * ratio ** np.arange(levels, -1, -1)
    return np.concatenate(([0.0], pts))


def _theta_rule(theta_m, theta_M, nt):
    x, w = gauss_legendre(nt)
    mid = 0.5 * (theta_m + theta_M)
    half = 0.5 * (theta_M - theta_m)
    return mid + half * x, half * w


def _refine(levels, eval_fn, tol):
    """Run eval_fn at increasing refinement levels until agreement < tol/2."""
    prev = None
    err = np.inf
    for lv in levels:
        val = eval_fn(lv)
        if prev is not None:
            err = abs(val - prev)
            if err <= 0.5 * tol:
                return val, err, True
        prev = val
    return prev, err, False


def sector_u0_integral(theta_m, theta_M, s, rmax, tol=1e-10):
    """Integral of u0(s x) over the truncated sector W cap B_rmax."""

    def eval_fn(lv):
        nr, nt = lv
        r, wr = panel_rule(graded_breaks(0.0, rmax), nr)
        t, wt = _theta_rule(theta_m, theta_M, nt)
        return _kernels.sector_quad_sum(r, wr, t, wt, float(s))

    val, err, ok = _refine([(12, 12), (16, 24), (24, 48), (32, 96)], eval_fn, tol)
    return QuadResult(val, err, ok)


def sector_u0_abs_integral(theta_m, theta_M, s, alpha, rmax, tol=1e-10):
    """Integral of |u0(s x)| |x|^alpha over W cap B_rmax."""

    def eval_fn(lv):
        nr, nt = lv
        r, wr = panel_rule(graded_breaks(0.0, rmax), nr)
        t, wt = _theta_rule(theta_m, theta_M, nt)
        return _kernels.sector_abs_quad_sum(r, wr, t, wt, float(s), float(alpha))

    val, err, ok = _refine([(12, 12), (16, 24), (24, 48), (32, 96)], eval_fn, tol)
    return QuadResult(val, err, ok)


def annulus_u0_abs_integral(theta_m, theta_M, s, h, rmax, tol=1e-10):
    """Integral of |u0(s x)| over the annular sector W cap (B_rmax \\ B_h)."""
    if rmax <= h:
        return QuadResult(0.0, 0.0, True)

    def eval_fn(lv):
        nr, nt = lv
        r, wr = panel_rule(graded_breaks(h, rmax), nr)
        t, wt = _theta_rule(theta_m, theta_M, nt)
        return _kernels.sector_abs_quad_sum(r, wr, t, wt, float(s), 0.0)

    val, err, ok = _refine([(12, 12), (16, 24), (24, 48), (32, 96)], eval_fn, tol)
    return QuadResult(val, err, ok)


def edge_u0_integral(theta, s, h, g=None, tol=1e-12):
    """1D integral over an edge ray: int_0^h g(r) exp(-sqrt(s r) mu(theta)) dr.

    g is a vectorized callable of r (default: 1).
    """

    def eval_fn(nr):
        r, wr = panel_rule(graded_breaks(0.0, h), nr)
        gv = np.ones_like(r, dtype=complex) if g is None else np.asarray(g(r), dtype=complex)
        return _kernels.edge_quad_sum(r, wr, gv, float(s), float(theta))

    val, err, ok = _refine([10, 16, 24, 32], eval_fn, tol)
    return QuadResult(val, err, ok)


def sector_area_integral(f, theta_m, theta_M, h, s, tol=1e-11):
    """Integral of f(x) u0(s x) over the sector S_h, f vectorized on (n,2) points."""

    def eval_fn(lv):
        nr, nt = lv
        r, wr = panel_rule(graded_breaks(0.0, h), nr)
        t, wt = _theta_rule(theta_m, theta_M, nt)
        pts = np.empty((r.size * t.size, 2))
        rr = np.repeat(r, t.size)
        tt = np.tile(t, r.size)
        pts[:, 0] = rr * np.cos(tt)
        pts[:, 1] = rr * np.sin(tt)
        vals = np.asarray(f(pts), dtype=complex).reshape(r.size, t.size)
        return _kernels.area_quad_sum(r, wr, t, wt, vals, float(s))

    val, err, ok = _refine([(10, 12), (14, 24), (20, 48)], eval_fn, tol)
    return QuadResult(val, err, ok)


def arc_integral(F, theta_m, theta_M, tol=1e-12):
    """Adaptive Gauss-Legendre integral of a smooth vectorized F over [theta_m, theta_M]."""

    def eval_fn(nt):
        t, wt = _theta_rule(theta_m, theta_M, nt)
        return complex(np.sum(wt * np.asarray(F(t), dtype=complex)))

    val, err, ok = _refine([16, 32, 64, 128, 256], eval_fn, tol)
    return QuadResult(val, err, ok)
