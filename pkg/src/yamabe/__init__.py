"""Numerical verification of curvature identities and Yamabe-type soliton
conditions on coordinate charts.

The engine parses metric, vector-field and 1-form components as
closed-form expressions, differentiates them exactly with second-order
forward-mode jets, and evaluates curvature under the Levi-Civita,
semi-symmetric metric and projective semi-symmetric connections. On top
of that it classifies torse-forming vector fields and checks conformal
and star Yamabe soliton conditions against their closed-form constants.
"""

__version__ = "0.1.0"

from .expr import Expr, Jet2, ParseError, EvalDomainError, parse, eval_jet2, render
from .geometry import (
    Chart,
    MetricField,
    VectorField,
    OneFormField,
    FrameField,
    CurvatureAt,
    GeometryError,
    SingularMetricError,
    metric_at,
    christoffel_at,
    curvature_at,
    lie_bracket_at,
    covariant_derivative_at,
    lie_derivative_metric_at,
    frame_components_at,
)
from .connections import (
    ConnectionSpec,
    ConnectionAt,
    AuxTensorsAt,
    rho_from_pi,
    aux_tensors_at,
    connection_at,
    direct_curvature_at,
    modified_curvature_at,
    modified_lie_derivative_metric_at,
)
from .solitons import (
    TorseFit,
    StructureTensorField,
    SolitonReport,
    ZeroFieldError,
    NotTorseFormingError,
    fit_torse_forming_at,
    classify,
    lambda_closed_form,
    star_ricci_at,
    soliton_residual_at,
    trace_identity_check,
    fit_star_einstein_at,
    check_soliton,
)
from .config import ManifoldConfig, ConfigError, SamplingError, load_config, load_zoo, sample_points
from .zoo import ZOO_NAMES

__all__ = [name for name in dir() if not name.startswith("_")]
