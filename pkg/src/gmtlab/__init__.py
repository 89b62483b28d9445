"""gmtlab: a numerical laboratory for locally uniform surface measures."""

__version__ = "0.1.0"

from .catalog import MeasureSpec, RadialMassProfile, builtin, radial_profile, rescale
from .geometry import (
    CurvatureReport,
    GraphChart,
    ManifoldDescriptor,
    area_element,
    graph_chart_at,
    mean_curvature_vector,
    second_fundamental_form,
)
from .moments import MomentSet, QFormResult, moment_set, q_form, unit_ball_volume
from .quadrature import (
    BallRegion,
    QuadratureResult,
    integrate_cone_ball,
    integrate_over_ball,
    monte_carlo_fallback,
)
from .verification import (
    DensityLimits,
    UniformityReport,
    check_local_uniform,
    check_uniformly_distributed,
    density_limits,
    dimension_probe,
    key_equality_residual,
    lemma32_residual,
    orthogonality_check,
    sucp_probe,
    taylor_bound_check,
    wucp_probe,
)

__all__ = [
    "__version__",
    "MeasureSpec",
    "RadialMassProfile",
    "builtin",
    "radial_profile",
    "rescale",
    "CurvatureReport",
    "GraphChart",
    "ManifoldDescriptor",
    "area_element",
    "graph_chart_at",
    "mean_curvature_vector",
    "second_fundamental_form",
    "MomentSet",
    "QFormResult",
    "moment_set",
    "q_form",
    "unit_ball_volume",
    "BallRegion",
    "QuadratureResult",
    "integrate_cone_ball",
    "integrate_over_ball",
    "monte_carlo_fallback",
    "DensityLimits",
    "UniformityReport",
    "check_local_uniform",
    "check_uniformly_distributed",
    "density_limits",
    "dimension_probe",
    "key_equality_residual",
    "lemma32_residual",
    "orthogonality_check",
    "sucp_probe",
    "taylor_bound_check",
    "wucp_probe",
]
