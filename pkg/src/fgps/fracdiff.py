"""Periodicity-preserving fractional differentiation on equispaced grids.

The fractional derivative of order gamma in (0, 1) with sliding memory
length L reduces, after a change of variables, to

    D^gamma f(t) = L^(1-gamma) / Gamma(2-gamma) * integral_0^1
                   f'(t - L y^(1/(1-gamma))) dy,

which is free of kernel singularities.  Applied to the trigonometric
cardinal basis this yields a circulant differentiation matrix whose
distinct entries are quadratures of cardinal-function derivatives.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fourier import PeriodicGrid, cardinal_deriv
from .gegenbauer import integrate_unit

__all__ = [
    "FracDiffMatrix",
    "OracleConvergenceError",
    "fgpsq_entry",
    "build_fdm",
    "apply_fd",
    "fd_oracle",
    "save_fdm",
    "load_fdm",
]

_MAX_PANELS = 1 << 16
_PANEL_ORDER = 10


class OracleConvergenceError(RuntimeError):
    """Adaptive quadrature failed to meet tolerance within the panel budget."""

    def __init__(self, message, last_estimate):
        super().__init__(message)
        self.last_estimate = last_estimate


def _check_order(gamma):
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"fractional order must lie in (0, 1), got {gamma}")


def _check_memory(memory_len):
    if memory_len <= 0.0:
        raise ValueError(f"memory length must be positive, got {memory_len}")


def _scale(gamma, memory_len):
    return memory_len ** (1.0 - gamma) / math.gamma(2.0 - gamma)


@dataclass(frozen=True, eq=False)
class FracDiffMatrix:
    """Circulant fractional differentiation matrix stored as 2N-1 values."""

    gamma: float
    memory_len: float
    grid: PeriodicGrid
    first_row: np.ndarray = field(repr=False)
    first_col: np.ndarray = field(repr=False)
    scale: float

    def entry(self, r, s):
        """Reconstruct entry (r, s) by the Toeplitz rule."""
        return self.first_row[s - r] if s >= r else self.first_col[r - s]

    def to_dense(self):
        """Materialize the full N x N matrix from the stored diagonals."""
        n = self.grid.n
        out = np.empty((n, n))
        for r in range(n):
            out[r, :r] = self.first_col[r:0:-1]
            out[r, r:] = self.first_row[: n - r]
        return out


def fgpsq_entry(grid, rule, gamma, memory_len, r, s):
    """Quadrature value of integral_0^1 F_s'(x_r - L y^(1/(1-gamma))) dy.

    Depends on r and s only through (r - s) mod N by translation invariance
    of the periodic cardinal functions.
    """
    _check_order(gamma)
    _check_memory(memory_len)
    if not (0 <= r < grid.n and 0 <= s < grid.n):
        raise ValueError(f"indices ({r}, {s}) out of range for N={grid.n}")
    x_r = grid.period * r / grid.n
    args = x_r - memory_len * rule.shifted_nodes ** (1.0 / (1.0 - gamma))
    return integrate_unit(rule, cardinal_deriv(grid, s, args))


def build_fdm(grid, rule, gamma, memory_len):
    """Build the fractional differentiation matrix for the grid.

    Only the N distinct circulant values are computed; the matrix is stored
    as its first row and first column (2N - 1 values).  A warning is issued
    when the memory length violates L > 1 - gamma, the hypothesis under
    which the truncation-error bound holds.
    """
    _check_order(gamma)
    _check_memory(memory_len)
    if memory_len <= 1.0 - gamma:
        warnings.warn(
            f"memory length L={memory_len} does not satisfy L > 1 - gamma "
            f"= {1.0 - gamma}; error bounds are not guaranteed",
            stacklevel=2,
        )
    n = grid.n
    scale = _scale(gamma, memory_len)
    q = np.array([fgpsq_entry(grid, rule, gamma, memory_len, d, 0) for d in range(n)])
    first_col = scale * q
    first_row = np.empty(n)
    first_row[0] = first_col[0]
    first_row[1:] = first_col[:0:-1]
    first_col.setflags(write=False)
    first_row.setflags(write=False)
    return FracDiffMatrix(gamma=gamma, memory_len=memory_len, grid=grid,
                          first_row=first_row, first_col=first_col, scale=scale)


def apply_fd(matrix, samples):
    """Matrix-vector product using Toeplitz reconstruction, O(N) extra storage."""
    samples = np.asarray(samples, dtype=float)
    n = matrix.grid.n
    if samples.shape != (n,):
        raise ValueError(f"expected {n} samples, got {samples.shape}")
    out = np.empty(n)
    for r in range(n):
        row = np.concatenate((matrix.first_col[r:0:-1], matrix.first_row[: n - r]))
        out[r] = row @ samples
    return out


@lru_cache(maxsize=1)
def _panel_rule():
    return np.polynomial.legendre.leggauss(_PANEL_ORDER)


def _composite_gauss(g, panels):
    """Composite Gauss rule on [0, 1] with the given number of equal panels."""
    xi, wi = _panel_rule()
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 / panels
    centers = 0.5 * (edges[:-1] + edges[1:])
    pts = (centers[:, None] + half * xi[None, :]).ravel()
    wts = np.broadcast_to(half * wi, (panels, _PANEL_ORDER)).ravel()
    return float(wts @ g(pts))


def fd_oracle(f_prime, gamma, memory_len, t, tol=1e-12):
    """Reference value of the sliding-memory fractional derivative at t.

    Evaluates the defining unit-interval integral of f' by adaptive
    panel-doubling composite Gauss quadrature, independent of the matrix
    construction path.
    """
    _check_order(gamma)
    _check_memory(memory_len)
    power = 1.0 / (1.0 - gamma)

    def g(y):
        with np.errstate(under="ignore"):
            arg = t - memory_len * y**power
        return np.asarray(f_prime(arg), dtype=float)

    previous = _composite_gauss(g, 1)
    panels = 2
    while panels <= _MAX_PANELS:
        current = _composite_gauss(g, panels)
        if abs(current - previous) < tol:
            return _scale(gamma, memory_len) * current
        previous = current
        panels *= 2
    raise OracleConvergenceError(
        f"quadrature did not reach tol={tol} within {_MAX_PANELS} panels",
        _scale(gamma, memory_len) * previous,
    )


def save_fdm(matrix, rule, path):
    """Write the 2N-1 diagonal values to a CSV cache file.

    The parameter row records the quadrature settings so a later run can
    check that a cached matrix matches its request.
    """
    n = matrix.grid.n
    with open(path, "w") as fh:
        fh.write("gamma,L,N,T,lambda,n_g\n")
        fh.write(
            f"{matrix.gamma:.17g},{matrix.memory_len:.17g},{n},"
            f"{matrix.grid.period:.17g},{rule.lam:.17g},{rule.n_g}\n"
        )
        values = np.concatenate((matrix.first_row, matrix.first_col[1:]))
        fh.write(",".join(f"{v:.17g}" for v in values) + "\n")


def load_fdm(path):
    """Read a matrix back from a CSV cache file.

    Returns (matrix, lambda, n_g) with the quadrature parameters the cache
    was built with.
    """
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "gamma,L,N,T,lambda,n_g":
            raise ValueError(f"bad FDM cache header: {header!r}")
        params = fh.readline().strip().split(",")
        if len(params) != 6:
            raise ValueError("malformed FDM cache parameter line")
        gamma, memory_len = float(params[0]), float(params[1])
        n, period = int(params[2]), float(params[3])
        lam, n_g = float(params[4]), int(params[5])
        values = np.array(fh.readline().strip().split(","), dtype=float)
    if values.size != 2 * n - 1:
        raise ValueError(
            f"expected {2 * n - 1} diagonal values, found {values.size}"
        )
    first_row = values[:n].copy()
    first_col = np.concatenate(([values[0]], values[n:]))
    first_row.setflags(write=False)
    first_col.setflags(write=False)
    matrix = FracDiffMatrix(gamma=gamma, memory_len=memory_len,
                            grid=PeriodicGrid(period, n),
                            first_row=first_row, first_col=first_col,
                            scale=_scale(gamma, memory_len))
    return matrix, lam, n_g
