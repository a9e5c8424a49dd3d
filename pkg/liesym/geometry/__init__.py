from .tensors import (  # noqa: F401
    Connection,
    Coordinates,
    MetricField,
    VectorField,
    christoffel,
    lie_derivative_connection,
    lie_derivative_metric,
)
from .collineations import (  # noqa: F401
    CollineationClass,
    CollineationTag,
    classify_collineation,
    conformal_factor,
    contracted_trace_check,
    potential_factor,
)
