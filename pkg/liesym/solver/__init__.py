from .homothetic import (  # noqa: F401
    AlgebraBasis,
    AlgebraElement,
    Ansatz,
    solve_homothetic,
)
from .catalogs import desitter_catalog, euclidean_catalog  # noqa: F401
