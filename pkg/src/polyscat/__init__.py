"""2D Helmholtz scattering from piecewise conductive polygonal media.

Subpackages/modules:
  geometry  - polygons, nest/cell partitions, corner sectors, point location
  medium    - material data and incident fields
  cgo       - decaying corner test function: closed forms, bounds, quadratures
  forward   - boundary-integral transmission solver and disk series oracle
  probe     - corner functionals and parameter-difference extraction
  harness   - config-driven command line front end
"""

from . import _kernels, cgo, geometry, medium

__all__ = ["_kernels", "cgo", "geometry", "medium"]
__version__ = "0.1.0"
