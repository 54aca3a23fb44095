"""Parallel transport along geodesics of matrix manifolds."""

from ._manitrans import (  # noqa: F401
    ConfigError,
    DimensionError,
    Error,
    IntegrationError,
    NumericalError,
    ValidationError,
    FlagTransportPlan,
    GLGeometry,
    SOGeometry,
    StiefelTransportPlan,
    flag_christoffel,
    flag_geodesic,
    flag_horizontal_project,
    flag_transport,
    grassmann_geodesic,
    grassmann_transport,
    metric_inner,
    project_tangent,
    run_isometry,
    run_verify,
    stiefel_christoffel,
    stiefel_geodesic,
    stiefel_transport,
)
