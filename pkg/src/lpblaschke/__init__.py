"""L_p Brunn-Minkowski toolkit.

L_p surface area measures of polytopes, the L_p cosine transform, projection,
centroid and moment bodies, a solver for the even (volume-normalized)
L_p Minkowski problem, L_p Blaschke sums and symmetric L_p curvature images,
with property checks for their identities.
"""
__version__ = "0.1.0"

from .blaschke import (
    BodyValuedOperator,
    NotSymmetricError,
    blaschke_sum,
    curvature_data,
    curvature_image,
    curvature_operator,
    from_normalized,
    identity_operator,
    normalized_blaschke_sum,
    normalized_curvature_image,
    normalized_curvature_operator,
    rotate_quarter,
    rotated,
    to_normalized,
)
from .convexbody import (
    DegenerateBodyError,
    LinearMap,
    OriginNotInteriorError,
    Polytope,
    SampledBody,
    SingularMapError,
    apply_linear,
    hausdorff_distance,
    lp_surface_area_measure,
    radial,
    relative_hausdorff,
    support,
    surface_area_measure,
    valuation_quadruple,
    volume,
)
from .kernels import BACKEND
from .lptransform import (
    calibrate_cnp,
    centroid_body,
    cosine_transform,
    lp_zonoid,
    moment_body,
    projection_body,
    projection_body_boundary,
    support_point,
)
from .minkowski import (
    ConcentrationError,
    NonConvergenceError,
    SolverConfig,
    SolverReport,
    solve_even,
    solve_normalized_even,
)
from .spherical import (
    DirectionGrid,
    DiscreteMeasure,
    build_grid,
    concentration_gap,
    default_grid,
    even_part,
)

__all__ = [
    "__version__",
    "BACKEND",
    "BodyValuedOperator",
    "ConcentrationError",
    "DegenerateBodyError",
    "DirectionGrid",
    "DiscreteMeasure",
    "LinearMap",
    "NonConvergenceError",
    "NotSymmetricError",
    "OriginNotInteriorError",
    "Polytope",
    "SampledBody",
    "SingularMapError",
    "SolverConfig",
    "SolverReport",
    "apply_linear",
    "blaschke_sum",
    "build_grid",
    "calibrate_cnp",
    "centroid_body",
    "concentration_gap",
    "cosine_transform",
    "curvature_data",
    "curvature_image",
    "curvature_operator",
    "default_grid",
    "even_part",
    "from_normalized",
    "hausdorff_distance",
    "identity_operator",
    "lp_surface_area_measure",
    "lp_zonoid",
    "moment_body",
    "normalized_blaschke_sum",
    "normalized_curvature_image",
    "normalized_curvature_operator",
    "projection_body",
    "projection_body_boundary",
    "radial",
    "relative_hausdorff",
    "rotate_quarter",
    "rotated",
    "solve_even",
    "solve_normalized_even",
    "support",
    "support_point",
    "surface_area_measure",
    "to_normalized",
    "valuation_quadruple",
    "volume",
]
