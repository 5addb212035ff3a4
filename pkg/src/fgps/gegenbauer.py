"""Gegenbauer polynomials and shifted Gegenbauer-Gauss quadrature on [0, 1].

The polynomials follow the standardization in which every degree evaluates
to 1 at x = 1, so that lambda = 0 gives Chebyshev polynomials of the first
kind and lambda = 1/2 gives Legendre polynomials.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve

__all__ = [
    "QuadratureRule",
    "RootFindingError",
    "gegenbauer_eval",
    "gg_nodes",
    "plain_integral_weights",
    "integrate_unit",
    "quadrature_rule",
    "save_rule",
    "load_rule",
]

# Standardization ratios blow up as lambda -> -1/2.
_LAMBDA_MIN = -0.5 + 1e-8

_NEWTON_MAX_ITER = 100


class RootFindingError(RuntimeError):
    """Raised when Newton refinement of polynomial zeros fails to converge."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


def _check_lambda(lam):
    if lam <= _LAMBDA_MIN:
        raise ValueError(f"Gegenbauer index must satisfy lambda > -1/2, got {lam}")


def _eval_with_deriv(n, lam, x):
    """Value and first derivative of the degree-n standardized polynomial."""
    x = np.asarray(x, dtype=float)
    g_prev = np.ones_like(x)
    d_prev = np.zeros_like(x)
    if n == 0:
        return g_prev, d_prev
    g = x.copy()
    d = np.ones_like(x)
    # (k + 2*lam) G_{k+1} = 2 (k + lam) x G_k - k G_{k-1}
    for k in range(1, n):
        c = k + 2.0 * lam
        g_next = (2.0 * (k + lam) * x * g - k * g_prev) / c
        d_next = (2.0 * (k + lam) * (g + x * d) - k * d_prev) / c
        g_prev, g = g, g_next
        d_prev, d = d, d_next
    return g, d


def gegenbauer_eval(n, lam, x):
    """Evaluate the degree-n Gegenbauer polynomial with index lam at x.

    Standardized so the value at x = 1 is 1 for every degree.  Accepts a
    scalar or an array for x.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    _check_lambda(lam)
    scalar = np.isscalar(x)
    g, _ = _eval_with_deriv(n, lam, x)
    return float(g) if scalar else g


def gg_nodes(n_g, lam):
    """Zeros of the degree-(n_g + 1) Gegenbauer polynomial, increasing.

    Newton refinement from asymptotic-angle initial guesses; the zeros do
    not depend on the polynomial standardization.
    """
    if n_g < 0:
        raise ValueError(f"n_g must be non-negative, got {n_g}")
    _check_lambda(lam)
    deg = n_g + 1
    k = np.arange(deg - 1, -1, -1)
    # Asymptotic angles; exact at lam = 0 (Chebyshev) and lam = 1.
    z = np.cos(np.pi * (k + 0.5 * (lam + 1.0)) / (deg + lam))
    eps = np.finfo(float).eps
    for _ in range(_NEWTON_MAX_ITER):
        g, d = _eval_with_deriv(deg, lam, z)
        step = g / d
        z = np.clip(z - step, -1.0, 1.0)
        if np.all(np.abs(step) <= 4.0 * eps * (1.0 + np.abs(z))):
            break
    res = np.abs(_eval_with_deriv(deg, lam, z)[0])
    # Recurrence evaluation noise grows ~ deg * eps, so relax at large degree.
    tol = max(1e-13, 64.0 * deg * eps)
    if np.any(res > tol):
        worst = int(np.argmax(res))
        raise RootFindingError(
            f"zero refinement stalled at index {worst} (residual {res[worst]:.3e})",
            worst,
        )
    if deg > 1 and np.any(np.diff(z) <= 0.0):
        raise RootFindingError("refined zeros are not strictly increasing", -1)
    return z


def plain_integral_weights(shifted_nodes):
    """Weights integrating the nodal interpolant exactly over [0, 1].

    The Lagrange cardinal polynomials are expanded in the Chebyshev basis
    (mapped to [0, 1]) and integrated term by term, which amounts to solving
    V w = m with V the Chebyshev-Vandermonde matrix at the nodes and m the
    Chebyshev moments of the plain integral.
    """
    z_hat = np.asarray(shifted_nodes, dtype=float)
    if z_hat.ndim != 1 or z_hat.size == 0:
        raise ValueError("nodes must be a non-empty 1-D sequence")
    if np.any(z_hat <= 0.0) or np.any(z_hat >= 1.0):
        raise ValueError("shifted nodes must lie strictly inside (0, 1)")
    if z_hat.size > 1 and np.min(np.diff(np.sort(z_hat))) < 1e-14:
        raise ValueError("nodes are nearly coincident (spacing < 1e-14)")
    n = z_hat.size - 1
    z = 2.0 * z_hat - 1.0
    vand = np.polynomial.chebyshev.chebvander(z, n).T
    # (1/2) * integral of T_k over [-1, 1]: zero for odd k, 1/(1-k^2) even.
    moments = np.zeros(n + 1)
    even = np.arange(0, n + 1, 2)
    moments[even] = 1.0 / (1.0 - even.astype(float) ** 2)
    return solve(vand, moments)


def integrate_unit(rule, samples):
    """Quadrature approximation of the integral over [0, 1].

    samples[j] must hold the integrand value at rule.shifted_nodes[j].
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != rule.weights.shape:
        raise ValueError(
            f"expected {rule.weights.size} samples, got {samples.size}"
        )
    return float(rule.weights @ samples)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Shifted Gegenbauer-Gauss nodes and plain-integral weights on [0, 1]."""

    lam: float
    n_g: int
    nodes: np.ndarray
    shifted_nodes: np.ndarray
    weights: np.ndarray


@lru_cache(maxsize=32)
def quadrature_rule(n_g, lam=0.0):
    """Construct (and cache) the quadrature rule for the given parameters."""
    nodes = gg_nodes(n_g, lam)
    shifted = 0.5 * (nodes + 1.0)
    weights = plain_integral_weights(shifted)
    for arr in (nodes, shifted, weights):
        arr.setflags(write=False)
    return QuadratureRule(lam=lam, n_g=n_g, nodes=nodes,
                          shifted_nodes=shifted, weights=weights)


def save_rule(rule, path):
    """Write a rule to a CSV cache file (17 significant digits)."""
    with open(path, "w") as fh:
        fh.write("lambda,n_g\n")
        fh.write(f"{rule.lam:.17g},{rule.n_g}\n")
        for z, zh, w in zip(rule.nodes, rule.shifted_nodes, rule.weights):
            fh.write(f"{z:.17g},{zh:.17g},{w:.17g}\n")


def load_rule(path):
    """Read a rule back from a CSV cache file."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "lambda,n_g":
            raise ValueError(f"bad rule cache header: {header!r}")
        parts = fh.readline().strip().split(",")
        if len(parts) != 2:
            raise ValueError("malformed rule cache parameter line")
        lam, n_g = float(parts[0]), int(parts[1])
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if len(rows) != n_g + 1 or any(len(r) != 3 for r in rows):
        raise ValueError("rule cache node table has the wrong shape")
    data = np.array(rows, dtype=float)
    nodes, shifted, weights = data[:, 0], data[:, 1], data[:, 2]
    for arr in (nodes, shifted, weights):
        arr.setflags(write=False)
    return QuadratureRule(lam=lam, n_g=n_g, nodes=nodes,
                          shifted_nodes=shifted, weights=weights)
