"""Global collocation system assembly and direct solution.

The interior unknowns u(x_l, t_j), (l, j) in 1..N1-1 x 1..N2-1, are mapped
to a single index by the affine bijection idx(j, l) = (l-1) + (N1-1)(j-1)
(+1 in the 1-based convention).  Each collocation row couples one full row
of the spatial differentiation matrix and one full row of the temporal
one; everything outside that pattern is an exact structural zero.
"""

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .fourier import GridFunction2D

__all__ = [
    "IndexMap",
    "CollocationSystem",
    "SingularSystemError",
    "build_index_map",
    "assemble",
    "solve",
    "condition_number_2norm",
    "dump_system",
]


class SingularSystemError(RuntimeError):
    """The assembled matrix is singular to working precision."""

    def __init__(self, message, pivot_index):
        super().__init__(message)
        self.pivot_index = pivot_index


@dataclass(frozen=True, eq=False)
class IndexMap:
    """1-based map from interior grid coordinates (j, l) to global indices."""

    n1: int
    n2: int
    entries: np.ndarray = field(repr=False)


def build_index_map(n1, n2):
    """Index matrix with entry (j, l) = (l-1) + (N1-1)(j-1) + 1, 1-based."""
    for name, n in (("N1", n1), ("N2", n2)):
        if n < 4 or n % 2 != 0:
            raise ValueError(f"{name} must be an even integer >= 4, got {n}")
    x = np.tile(np.arange(n1 - 1), (n2 - 1, 1))
    y = np.tile(np.arange(n2 - 1)[:, None], (1, n1 - 1))
    return IndexMap(n1=n1, n2=n2, entries=x + (n1 - 1) * y + 1)


@dataclass(frozen=True, eq=False)
class CollocationSystem:
    """Dense global matrix, right-hand side, and the data needed to extend
    the interior solution to the full grid."""

    a_matrix: np.ndarray = field(repr=False)
    f_vector: np.ndarray = field(repr=False)
    index_map: IndexMap
    structural_nonzeros: int
    grid_x: object
    grid_t: object
    g_values: np.ndarray = field(repr=False)
    h_values: np.ndarray = field(repr=False)


def assemble(problem, d_alpha, d_beta):
    """Assemble the global system from problem data and the two FDMs.

    d_alpha acts along x on the N1-grid with order alpha; d_beta acts along
    t on the N2-grid with order beta.  Initial-value terms are moved to the
    right-hand side.
    """
    grid_x, grid_t = d_alpha.grid, d_beta.grid
    n1, n2 = grid_x.n, grid_t.n
    g0 = problem.init_g(0.0)
    h0 = problem.init_h(0.0)
    if abs(g0 - h0) > 1e-10:
        raise ValueError(
            f"inconsistent initial data: g(0)={g0!r} differs from h(0)={h0!r}"
        )
    imap = build_index_map(n1, n2)
    idx = imap.entries - 1  # 0-based global indices, idx[j-1, l-1]

    xs, ts = grid_x.nodes, grid_t.nodes
    da = d_alpha.to_dense()
    db = d_beta.to_dense()
    g_vals = np.array([problem.init_g(x) for x in xs])
    h_vals = np.array([problem.init_h(t) for t in ts])

    size = (n1 - 1) * (n2 - 1)
    a_mat = np.zeros((size, size))
    f_vec = np.empty(size)
    for j in range(1, n2):
        for l in range(1, n1):
            row = idx[j - 1, l - 1]
            a_lj = problem.coeff_a(xs[l], ts[j])
            b_lj = problem.coeff_b(xs[l], ts[j])
            a_mat[row, idx[j - 1, :]] = a_lj * da[l, 1:]
            a_mat[row, idx[:, l - 1]] += b_lj * db[j, 1:]
            f_vec[row] = (
                problem.source_f(xs[l], ts[j])
                - a_lj * da[l, 0] * h_vals[j]
                - b_lj * db[j, 0] * g_vals[l]
            )
    # Pattern: per row, N1-1 spatial entries plus N2-2 extra temporal ones.
    nnz = size * ((n1 - 1) + (n2 - 2))
    return CollocationSystem(a_matrix=a_mat, f_vector=f_vec, index_map=imap,
                             structural_nonzeros=nnz, grid_x=grid_x,
                             grid_t=grid_t, g_values=g_vals, h_values=h_vals)


def solve(system):
    """Solve the system by dense LU with partial pivoting.

    Returns (solution, elapsed_seconds) where the solution is the full-grid
    function: interior values come from the linear solve, row 0 is assigned
    from h and column 0 from g.
    """
    n1, n2 = system.grid_x.n, system.grid_t.n
    start = time.perf_counter()
    lu, piv = lu_factor(system.a_matrix)
    diag = np.abs(np.diag(lu))
    tiny = np.finfo(float).eps * max(1.0, np.abs(system.a_matrix).max()) * lu.shape[0]
    if diag.min() <= tiny:
        k = int(np.argmin(diag))
        raise SingularSystemError(
            f"singular to working precision at pivot {k}", k
        )
    u_vec = lu_solve((lu, piv), system.f_vector)
    elapsed = time.perf_counter() - start

    values = np.empty((n1, n2))
    values[:, 0] = system.g_values
    values[0, :] = system.h_values
    idx = system.index_map.entries - 1
    for j in range(1, n2):
        for l in range(1, n1):
            values[l, j] = u_vec[idx[j - 1, l - 1]]
    solution = GridFunction2D(grid_x=system.grid_x, grid_t=system.grid_t,
                              values=values)
    return solution, elapsed


def condition_number_2norm(system):
    """2-norm condition number sigma_max / sigma_min of the global matrix."""
    sigma = np.linalg.svd(system.a_matrix, compute_uv=False)
    if sigma[-1] == 0.0:
        return float("inf")
    return float(sigma[0] / sigma[-1])


def dump_system(system, a_path, f_path):
    """Write the dense matrix (row-major) and right-hand side to CSV files."""
    with open(a_path, "w") as fh:
        for row in system.a_matrix:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    with open(f_path, "w") as fh:
        for v in system.f_vector:
            fh.write(f"{v:.17g}\n")
