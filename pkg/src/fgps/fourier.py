"""Equispaced periodic grids and trigonometric Lagrange cardinal functions.

The cardinal function attached to node x_l of an N-point grid with period T
is F_l(x) = sin(N nu) cot(nu) / N with nu = pi (x - x_l) / T, which is 1 at
x_l and 0 at every other grid node.  N must be even for this closed form.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PeriodicGrid",
    "GridFunction2D",
    "cardinal_eval",
    "cardinal_deriv",
    "cardinal_matrix",
    "interpolate_1d",
    "tensor_interpolate",
    "tensor_interpolate_grid",
]

# Below this |sin nu| the sin*cot product is evaluated by its Taylor series.
_SERIES_CUTOFF = 1e-7


@dataclass(frozen=True, eq=True)
class PeriodicGrid:
    """N equispaced nodes T*j/N on [0, T)."""

    period: float
    n: int

    def __post_init__(self):
        if self.period <= 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.n <= 0 or self.n % 2 != 0:
            raise ValueError(f"node count must be a positive even integer, got {self.n}")

    @property
    def nodes(self):
        return self.period * np.arange(self.n) / self.n


@dataclass(frozen=True, eq=False)
class GridFunction2D:
    """Samples u[l, j] = u(x_l, t_j) on a tensor-product periodic grid."""

    grid_x: PeriodicGrid
    grid_t: PeriodicGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != (self.grid_x.n, self.grid_t.n):
            raise ValueError(
                f"values shape {self.values.shape} does not match grids "
                f"({self.grid_x.n}, {self.grid_t.n})"
            )


def _check_index(grid, l):
    if not 0 <= l < grid.n:
        raise ValueError(f"node index {l} out of range for N={grid.n}")


def cardinal_eval(grid, l, x):
    """Evaluate the cardinal function F_l at x (scalar or array)."""
    _check_index(grid, l)
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    n, t = grid.n, grid.period
    nu = np.pi * (x - t * l / n) / t
    # Distance to the nearest multiple of pi; F only depends on it (even N).
    eps = nu - np.pi * np.round(nu / np.pi)
    out = np.empty_like(nu)
    near = np.abs(np.sin(nu)) < _SERIES_CUTOFF
    far = ~near
    nu_f = nu[far]
    out[far] = np.sin(n * nu_f) / (n * np.tan(nu_f))
    e = eps[near]
    c2 = n * n / 6.0 + 1.0 / 3.0
    c4 = n**4 / 120.0 + n * n / 18.0 - 1.0 / 45.0
    out[near] = 1.0 - c2 * e * e + c4 * e**4
    return float(out) if scalar else out


def cardinal_deriv(grid, l, x):
    """Evaluate the analytic first derivative F_l' at x (scalar or array)."""
    _check_index(grid, l)
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=float)
    n, t = grid.n, grid.period
    nu = np.pi * (x - t * l / n) / t
    eps = nu - np.pi * np.round(nu / np.pi)
    out = np.empty_like(nu)
    near = np.abs(np.sin(nu)) < _SERIES_CUTOFF
    far = ~near
    nu_f = nu[far]
    s = np.sin(nu_f)
    out[far] = (np.pi / (n * t)) * (
        n * np.cos(n * nu_f) / np.tan(nu_f) - np.sin(n * nu_f) / (s * s)
    )
    e = eps[near]
    c2 = n * n / 6.0 + 1.0 / 3.0
    c4 = n**4 / 120.0 + n * n / 18.0 - 1.0 / 45.0
    out[near] = (np.pi / t) * (-2.0 * c2 * e + 4.0 * c4 * e**3)
    return float(out) if scalar else out


def cardinal_matrix(grid, x):
    """Matrix B with B[i, l] = F_l(x_i), for vectorized interpolation."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.column_stack([cardinal_eval(grid, l, x) for l in range(grid.n)])


def interpolate_1d(grid, samples, x):
    """Trigonometric interpolation of grid samples, evaluated at x."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} samples, got {samples.shape}")
    scalar = np.isscalar(x)
    out = cardinal_matrix(grid, x) @ samples
    return float(out[0]) if scalar else out


def tensor_interpolate(u, x, t):
    """Tensor-product trigonometric interpolant of a 2-D grid function."""
    bx = cardinal_matrix(u.grid_x, x)
    bt = cardinal_matrix(u.grid_t, t)
    return float((bx @ u.values @ bt.T)[0, 0])


def tensor_interpolate_grid(u, xs, ts):
    """Interpolant evaluated on the tensor grid xs x ts; shape (len(xs), len(ts))."""
    bx = cardinal_matrix(u.grid_x, xs)
    bt = cardinal_matrix(u.grid_t, ts)
    return bx @ u.values @ bt.T
