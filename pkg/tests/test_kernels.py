"""Parity of the numba fast path against the pure-numpy fallback."""

import numpy as np
import pytest

from polyscat import _kernels


@pytest.fixture(scope="module")
def grids():
    rng = np.random.default_rng(0)
    r = np.sort(rng.uniform(1e-6, 3.0, 40))
    wr = rng.uniform(0.1, 1.0, 40)
    th = np.sort(rng.uniform(-1.2, 1.4, 24))
    wt = rng.uniform(0.1, 1.0, 24)
    vals = rng.normal(size=(40, 24)) + 1j * rng.normal(size=(40, 24))
    return r, wr, th, wt, vals


def test_active_impl_reported():
    assert _kernels.IMPL in ("numba", "numpy")


def test_u0_polar_paths_agree(grids):
    r, _, th, _, _ = grids
    fast = _kernels.u0_polar(r, th, 7.5)
    ref = _kernels.NUMPY_IMPLS["u0_polar"](r, th, 7.5)
    assert np.allclose(fast, ref, rtol=1e-14, atol=1e-300)


def test_sector_sum_paths_agree(grids):
    r, wr, th, wt, _ = grids
    fast = _kernels.sector_quad_sum(r, wr, th, wt, 3.0)
    ref = _kernels.NUMPY_IMPLS["sector_quad_sum"](r, wr, th, wt, 3.0)
    assert abs(fast - ref) < 1e-13 * max(abs(ref), 1)


def test_abs_sum_paths_agree(grids):
    r, wr, th, wt, _ = grids
    fast = _kernels.sector_abs_quad_sum(r, wr, th, wt, 3.0, 0.5)
    ref = _kernels.NUMPY_IMPLS["sector_abs_quad_sum"](r, wr, th, wt, 3.0, 0.5)
    assert fast == pytest.approx(ref, rel=1e-13)


def test_edge_sum_paths_agree(grids):
    r, wr, _, _, vals = grids
    g = vals[:, 0]
    fast = _kernels.edge_quad_sum(r, wr, g, 12.0, 0.8)
    ref = _kernels.NUMPY_IMPLS["edge_quad_sum"](r, wr, g, 12.0, 0.8)
    assert abs(fast - ref) < 1e-13 * max(abs(ref), 1)


def test_area_sum_paths_agree(grids):
    r, wr, th, wt, vals = grids
    fast = _kernels.area_quad_sum(r, wr, th, wt, vals, 5.0)
    ref = _kernels.NUMPY_IMPLS["area_quad_sum"](r, wr, th, wt, vals, 5.0)
    assert abs(fast - ref) < 1e-12 * max(abs(ref), 1)
