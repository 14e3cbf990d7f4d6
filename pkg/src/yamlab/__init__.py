"""Numerical Yamabe constants of warped products with round-sphere fibers."""

from types import ModuleType as _ModuleType

from .errors import (
    ConvergenceError,
    DomainError,
    ResolutionError,
    UnsupportedDimensionError,
    YamlabError,
)
from .fields import (
    YamabeConstants,
    dirichlet_energy,
    dirichlet_split,
    integrate,
    laplacian_apply,
    lp_norm,
    random_smooth_field,
    round_sphere_yamabe,
    total_scalar_curvature,
    yamabe_constants,
    yamabe_quotient,
)
from .grid import (
    AxisGrid,
    CatalogEntry,
    PointFactor,
    ProductModel,
    SphereGrid2,
    assemble_product,
    build_circle,
    build_factor,
    build_full_sphere2,
    build_interval,
    build_radial_sphere,
    circle,
    full_sphere2,
    interval,
    point,
    round_sphere,
    scalar_curvature_warped,
    sphere_volume,
)
from .harness import Report, ReportRow, ScenarioConfig, emit_csv, run_scenario
from .solver import (
    SolveOptions,
    SolveResult,
    eigen_residual,
    first_eigenvalue,
    gauss_bonnet_constant,
    minimize_yamabe,
)
from .symmetrize import (
    QuotientBound,
    RearrangementTarget,
    StepProfile,
    build_target,
    check_equivariance,
    check_polya_szego,
    default_target,
    fiberwise_rearrange,
    rearrange_fiber,
    resample,
    spherical_rearrangement,
    symmetrized_model,
    symmetrized_quotient_bound,
)

__version__ = "0.1.0"

__all__ = [
    name for name, obj in dict(globals()).items()
    if not name.startswith("_") and not isinstance(obj, _ModuleType)
]
