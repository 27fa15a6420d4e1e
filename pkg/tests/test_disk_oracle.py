import numpy as np
import pytest
from scipy.special import h1vp, hankel1, jv, jvp

from polyscat.forward import disk_series_oracle, farfield_diff, uniform_directions


def textbook_single_disk(radius, q, k, direction, angles):
    """Transmission disk without a conductive layer, coefficients by Cramer."""
    kin = k * np.sqrt(q)
    m = int(np.ceil(k * radius + 20))
    cs = []
    for n in range(-m, m + 1):
        a11, a12 = hankel1(n, k * radius), -jv(n, kin * radius)
        a21, a22 = k * h1vp(n, k * radius), -kin * jvp(n, kin * radius)
        b1, b2 = -jv(n, k * radius), -k * jvp(n, k * radius)
        det = a11 * a22 - a12 * a21
        cs.append((b1 * a22 - a12 * b2) / det)
    theta_d = np.arctan2(direction[1], direction[0])
    ns = np.arange(-m, m + 1)
    phase = np.exp(1j * np.outer(angles - theta_d, ns))
    return np.sqrt(2 / (np.pi * k)) * np.exp(-1j * np.pi / 4) * (phase @ np.array(cs))


def test_matches_textbook_single_disk():
    angles = uniform_directions(128)
    ff = disk_series_oracle([1.0], [2.0], [0.0], 1.3, [0.6, 0.8], angles=angles)
    ref = textbook_single_disk(1.0, 2.0, 1.3, [0.6, 0.8], angles)
    assert np.max(np.abs(ff.values - ref)) < 1e-12


def test_zero_contrast_zero_farfield():
    ff = disk_series_oracle([1.0, 0.5], [1.0, 1.0], [0.0, 0.0], 1.0, [1.0, 0.0])
    assert np.max(np.abs(ff.values)) < 1e-14


def test_truncation_is_converged():
    args = ([1.0, 0.5], [2.0, 3.0], [0.5j, 0.0], 1.0, [1.0, 0.0])
    base = disk_series_oracle(*args, m_trunc=21)
    more = disk_series_oracle(*args, m_trunc=31)
    assert np.max(np.abs(base.values - more.values)) < 1e-12


def test_input_validation():
    with pytest.raises(ValueError, match="strictly decreasing"):
        disk_series_oracle([0.5, 1.0], [2.0, 3.0], [0.0, 0.0], 1.0, [1.0, 0.0])
    with pytest.raises(ValueError, match="m_trunc"):
        disk_series_oracle([1.0], [2.0], [0.0], 1.0, [1.0, 0.0], m_trunc=5)


def test_conductive_layer_changes_pattern():
    base = disk_series_oracle([1.0], [2.0], [0.0], 1.0, [1.0, 0.0])
    cond = disk_series_oracle([1.0], [2.0], [0.5j], 1.0, [1.0, 0.0])
    assert farfield_diff(base, cond) > 1e-2


def test_polygonal_solver_matches_disk_series(plane_inc):
    from polyscat.forward import solve_scatter
    from polyscat.geometry import NestPartition, Polygon
    from polyscat.medium import NestMedium

    def ngon(radius, m):
        th = np.arange(m) * 2 * np.pi / m
        return Polygon(np.column_stack([radius * np.cos(th), radius * np.sin(th)]))

    med = NestMedium(NestPartition([ngon(1.0, 64), ngon(0.5, 64)]),
                     q=[2.0, 3.0], lam=[0.5j, 0.0], k=1.0)
    res = solve_scatter(med, plane_inc, nodes_per_edge=6)
    angles = uniform_directions(256)
    oracle = disk_series_oracle([1.0, 0.5], [2.0, 3.0], [0.5j, 0.0], 1.0, [1.0, 0.0],
                                angles=angles)
    assert farfield_diff(res.far_field(angles), oracle) < 1e-2
