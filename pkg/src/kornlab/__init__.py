"""kornlab: a numerical laboratory for Korn-type inequalities on thin shells."""

from .geometry import (
    PatchDomain,
    SurfacePatch,
    Plate,
    Cylinder,
    SphereCap,
    Catenoid,
    make_builtin_surface,
    ThicknessProfile,
    ConstantThickness,
    SinusoidalThickness,
    make_thickness,
    ShellGrid,
    offset_map,
    validate_admissibility,
)
from .operators import (
    FieldSample,
    MatrixFieldSample,
    gradient_full,
    gradient_simplified,
    sym,
    l2_inner,
    l2_norm,
)

__version__ = "0.1.0"
