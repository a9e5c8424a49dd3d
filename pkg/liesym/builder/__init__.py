from .noether import (  # noqa: F401
    NoetherAlgebra,
    NoetherResult,
    noether_case1,
    noether_case2,
    noether_symmetries,
)
from .lie_ode import LieODEResult, lie_ode_from_projective  # noqa: F401
from .heat import (  # noqa: F401
    HeatAlgebra,
    HeatSymmetry,
    flat_heat_algebra,
    heat_symmetry_gradient,
    heat_symmetry_nongradient,
    linear_heat_algebra,
    qu_table,
    solve_heat_ansatz,
)
from .wave import WaveResult, wave_symmetries  # noqa: F401
from .counts import SymmetryCount, heat_symmetry_counts  # noqa: F401
