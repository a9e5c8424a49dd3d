from .jet import JetSpace, VelocitySpace  # noqa: F401
from .system import DeterminingEquation, DeterminingSystem  # noqa: F401
from .pde import (  # noqa: F401
    GeneratorPDE,
    PDEProblem,
    SymmetryCheck,
    determining_general,
    determining_linear,
    prolong2,
    prolong2_recursive,
    verify_symmetry,
)
from .ode import (  # noqa: F401
    ForceTensor,
    GeneratorODE,
    determining_ode,
)
