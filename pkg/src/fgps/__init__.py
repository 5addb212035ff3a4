"""Fourier-Gegenbauer pseudospectral solver for fractional PDEs with
periodic solutions."""

from .collocation import (
    CollocationSystem,
    IndexMap,
    SingularSystemError,
    assemble,
    build_index_map,
    condition_number_2norm,
    dump_system,
    solve,
)
from .fourier import (
    GridFunction2D,
    PeriodicGrid,
    cardinal_deriv,
    cardinal_eval,
    interpolate_1d,
    tensor_interpolate,
    tensor_interpolate_grid,
)
from .fracdiff import (
    FracDiffMatrix,
    OracleConvergenceError,
    apply_fd,
    build_fdm,
    fd_oracle,
    fgpsq_entry,
    load_fdm,
    save_fdm,
)
from .gegenbauer import (
    QuadratureRule,
    RootFindingError,
    gegenbauer_eval,
    gg_nodes,
    integrate_unit,
    plain_integral_weights,
    quadrature_rule,
)
from .problems import (
    ErrorReport,
    ProblemSpec,
    catalog,
    error_report,
    problem4_reference,
    rhs_from_exact,
)
from .solver import SolveResult, cached_fdm, solve_problem

__version__ = "0.1.0"
