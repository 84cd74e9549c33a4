"""slantgeo: numerical geometry of slant surfaces in E^4.

Analyzes parametrized surface patches in R^4 (= C^2 under a compatible
complex structure): Wirtinger angles and slantness, curvature (G, G^D,
mean curvature), the Gauss map into S^2_+ x S^2_- with recovery of every
complex structure a surface is slant for, the canonical 1-form Theta and
its integral loop holonomy, and quaternionic generators (helical
cylinders, cones, ruled surfaces) on S^3.
"""

from . import catalog, cxstruct, dsl, exterior, forms, gaussmap, jets, sphere3
from .cxstruct import ComplexStructure, jalpha, standard_structures, structure_from_zeta, zeta_of
from .exterior import MultiVector2k, OrientedPlane, hodge_star, project_pm, wedge2
from .gaussmap import detect_slant_structures, fit_circle, gauss_field
from .jets import Immersion, adapted_frame, jet_at, point_geometry, wirtinger_field

__version__ = "0.1.0"

__all__ = [
    "catalog", "cxstruct", "dsl", "exterior", "forms", "gaussmap", "jets",
    "sphere3", "ComplexStructure", "MultiVector2k", "OrientedPlane",
    "Immersion", "jalpha", "standard_structures", "structure_from_zeta",
    "zeta_of", "hodge_star", "project_pm", "wedge2",
    "detect_slant_structures", "fit_circle", "gauss_field", "adapted_frame",
    "jet_at", "point_geometry", "wirtinger_field", "__version__",
]
