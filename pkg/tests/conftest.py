import numpy as np
import pytest

from polyscat.geometry import CornerSector, NestPartition, Polygon
from polyscat.medium import IncidentField, NestMedium


@pytest.fixture(scope="session")
def unit_square():
    return Polygon([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])


@pytest.fixture(scope="session")
def nested_squares():
    outer = Polygon([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    inner = Polygon([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])
    return NestPartition([outer, inner])


@pytest.fixture(scope="session")
def plane_inc():
    return IncidentField("plane", direction=[1.0, 0.0])


@pytest.fixture(scope="session")
def conductive_square_solution(unit_square, plane_inc):
    """q=2, lambda=0.5i square solved once at a jump-resolving level."""
    from polyscat.forward import solve_scatter

    med = NestMedium(NestPartition([unit_square]), q=[2.0], lam=[0.5j], k=1.0)
    return med, solve_scatter(med, plane_inc, nodes_per_edge=64)


@pytest.fixture(scope="session")
def quarter_sector():
    return CornerSector([0.0, 0.0], 0.0, np.pi / 2, 1.0)


@pytest.fixture(scope="session")
def eta_scenario(quarter_sector):
    """Manufactured corner pair with eta1-eta2 = 0.3+0.1i and equal omegas."""
    from polyscat.probe import manufactured_scenario

    return manufactured_scenario(quarter_sector, 1.0, 2.0, 2.0, 0.5 + 0.1j, 0.2)


@pytest.fixture(scope="session")
def omega_scenario(quarter_sector):
    """Manufactured corner pair with omega1-omega2 = 0.5 and equal etas."""
    from polyscat.probe import manufactured_scenario

    return manufactured_scenario(quarter_sector, 1.0, 2.5, 2.0, 0.3, 0.3)
