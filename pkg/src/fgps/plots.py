"""Figure rendering for solve and convergence reports."""

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .fourier import tensor_interpolate_grid

__all__ = ["render_solution_figure", "render_convergence_figure"]


def render_solution_figure(spec, solution, path, m=100, reference=None):
    """Surface panels (exact, approximate, absolute error) as one figure.

    Falls back to a single approximate-solution panel when no exact
    solution is available.
    """
    xs = np.linspace(0.0, spec.period_x, m)
    ts = np.linspace(0.0, spec.period_t, m)
    approx = tensor_interpolate_grid(solution, xs, ts)
    truth = reference if reference is not None else spec.exact
    xg, tg = np.meshgrid(xs, ts, indexing="ij")

    if truth is None:
        fig = plt.figure(figsize=(5, 4))
        ax = fig.add_subplot(111, projection="3d")
        ax.plot_surface(xg, tg, approx, cmap="viridis", rstride=2, cstride=2)
        ax.set_title("approximate solution")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
    else:
        exact = np.array([[truth(x, t) for t in ts] for x in xs])
        fig = plt.figure(figsize=(13, 4))
        for i, (data, title) in enumerate(
            [(exact, "exact"), (approx, "approximate"),
             (np.abs(approx - exact), "absolute error")]
        ):
            ax = fig.add_subplot(1, 3, i + 1, projection="3d")
            ax.plot_surface(xg, tg, data, cmap="viridis", rstride=2, cstride=2)
            ax.set_title(title)
            ax.set_xlabel("x")
            ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence_figure(param, values, max_errs, path):
    """Semilog plot of the sweep error against the swept parameter."""
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.semilogy(values, max_errs, "o-")
    ax.set_xlabel(param)
    ax.set_ylabel("max abs error")
    ax.grid(True, which="both", alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
