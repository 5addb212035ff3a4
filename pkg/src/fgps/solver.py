"""End-to-end pipeline: quadrature rule, grids, FDMs, assembly, solve."""

import os
from dataclasses import dataclass

from .collocation import assemble, condition_number_2norm, solve
from .fourier import GridFunction2D, PeriodicGrid
from .fracdiff import build_fdm, load_fdm, save_fdm
from .gegenbauer import quadrature_rule

__all__ = ["SolveResult", "solve_problem", "cached_fdm"]


@dataclass(frozen=True, eq=False)
class SolveResult:
    solution: GridFunction2D
    system: object
    kappa: float
    elapsed: float


def _cache_name(grid, gamma, memory_len, lam, n_g):
    return (
        f"fdm_g{gamma:.17g}_L{memory_len:.17g}_N{grid.n}"
        f"_T{grid.period:.17g}_lam{lam:.17g}_ng{n_g}.csv"
    )


def cached_fdm(grid, rule, gamma, memory_len, cache_dir=None):
    """Build an FDM, loading/storing a CSV cache file when a dir is given."""
    if cache_dir is None:
        return build_fdm(grid, rule, gamma, memory_len)
    path = os.path.join(cache_dir, _cache_name(grid, gamma, memory_len,
                                               rule.lam, rule.n_g))
    if os.path.exists(path):
        matrix, lam, n_g = load_fdm(path)
        if lam != rule.lam or n_g != rule.n_g:
            raise ValueError(f"cache file {path} was built with other parameters")
        return matrix
    matrix = build_fdm(grid, rule, gamma, memory_len)
    save_fdm(matrix, rule, path)
    return matrix


def solve_problem(spec, n1=4, n2=4, n_g=1000, lam=0.0, cache_dir=None):
    """Run the full pipeline for a problem and return the solved grid.

    The reported elapsed time covers the linear solve only, to stay
    comparable across machines and repeated runs.
    """
    rule = quadrature_rule(n_g, lam)
    grid_x = PeriodicGrid(spec.period_x, n1)
    grid_t = PeriodicGrid(spec.period_t, n2)
    d_alpha = cached_fdm(grid_x, rule, spec.alpha, spec.memory_len, cache_dir)
    d_beta = cached_fdm(grid_t, rule, spec.beta, spec.memory_len, cache_dir)
    system = assemble(spec, d_alpha, d_beta)
    kappa = condition_number_2norm(system)
    solution, elapsed = solve(system)
    return SolveResult(solution=solution, system=system, kappa=kappa,
                       elapsed=elapsed)
