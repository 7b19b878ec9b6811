"""Circular-domain parameterization and n-sided OGB patch evaluation.

The unit disk serves as the domain of an n-sided patch.  `domain` builds
the constant-parameter level arcs, `param` inverts them into per-side
height values by bisection, `patch` evaluates corner-based control nets
over those heights, `mesh` tessellates and samples, and `cli` renders
bitmaps, line plots and OBJ meshes.
"""

from .domain import (
    Arc,
    BoundaryArc,
    DomainConfig,
    LevelSet,
    Line,
    arc_endpoints,
    from_canonical,
    level_set,
    level_set_points,
    side_corners,
    tangency_angle,
    to_canonical,
)
from .mesh import (
    DomainMesh,
    SurfaceMesh,
    isophote_scalar,
    sample_surface,
    tessellate_disk,
)
from .param import (
    BisectionSettings,
    BracketError,
    DomainError,
    corner_pair,
    deviation,
    gradient,
    height,
    height_batch,
    height_field,
    height_field_batch,
    height_for_side,
)
from .patch import (
    ControlNet,
    OgbParseError,
    SurfaceSample,
    bernstein,
    deficiency,
    demo_net,
    evaluate,
    evaluate_batch,
    load_net,
    save_net,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BisectionSettings",
    "BoundaryArc",
    "BracketError",
    "ControlNet",
    "DomainConfig",
    "DomainError",
    "DomainMesh",
    "LevelSet",
    "Line",
    "OgbParseError",
    "SurfaceMesh",
    "SurfaceSample",
    "arc_endpoints",
    "bernstein",
    "corner_pair",
    "deficiency",
    "demo_net",
    "deviation",
    "evaluate",
    "evaluate_batch",
    "from_canonical",
    "gradient",
    "height",
    "height_batch",
    "height_field",
    "height_field_batch",
    "height_for_side",
    "isophote_scalar",
    "level_set",
    "level_set_points",
    "load_net",
    "sample_surface",
    "save_net",
    "side_corners",
    "tangency_angle",
    "tessellate_disk",
    "to_canonical",
    "validate",
]
