"""Command-line front end.

Subcommands: solve, fdm, convergence, oracle-check.  Run configuration
comes from an optional flat key=value file plus command-line overrides;
all emitted decimals carry 17 significant digits so runs are reproducible
byte for byte.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from .fourier import PeriodicGrid, tensor_interpolate_grid
from .fracdiff import apply_fd, build_fdm, fd_oracle, save_fdm
from .gegenbauer import quadrature_rule
from .problems import catalog, error_report, problem4_reference
from .solver import solve_problem

_FIXED_ORDERS = {1: (0.5, 0.5), 2: (1.0 / 3.0, 2.0 / 3.0), 3: (0.7, 0.8)}

_CONFIG_KEYS = ("problem", "n1", "n2", "ng", "lambda", "L", "alpha", "beta",
                "eval_grid", "out", "cache_dir")


class ConfigError(ValueError):
    """A named configuration diagnostic."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    problem: int = 1
    n1: int = 4
    n2: int = 4
    ng: int = 1000
    lam: float = 0.0
    memory_len: float = 30.0
    alpha: float = None
    beta: float = None
    eval_grid: int = 100
    out: str = None
    cache_dir: str = None

    def validate(self):
        if self.problem not in (1, 2, 3, 4):
            raise ConfigError("problem", f"must be 1..4, got {self.problem}")
        for name, n in (("n1", self.n1), ("n2", self.n2)):
            if n < 4 or n % 2 != 0:
                raise ConfigError(name, f"must be an even integer >= 4, got {n}")
        if self.ng < 1:
            raise ConfigError("ng", f"must be >= 1, got {self.ng}")
        if self.lam <= -0.5:
            raise ConfigError("lambda", f"must exceed -1/2, got {self.lam}")
        if self.memory_len <= 0.0:
            raise ConfigError("L", f"must be positive, got {self.memory_len}")
        for name, v in (("alpha", self.alpha), ("beta", self.beta)):
            if v is None:
                continue
            if not 0.0 < v <= 1.0:
                raise ConfigError(name, f"must lie in (0, 1], got {v}")
            if v == 1.0 and self.problem != 4:
                raise ConfigError(name, "order 1 is allowed only for problem 4")
        if self.eval_grid < 2:
            raise ConfigError("eval_grid", f"must be >= 2, got {self.eval_grid}")
        if self.cache_dir is not None and not os.path.isdir(self.cache_dir):
            raise ConfigError("cache_dir", f"not a directory: {self.cache_dir}")

    def resolved_orders(self):
        """Fill in the fixed fractional orders for problems 1-3."""
        if self.problem in _FIXED_ORDERS:
            fixed = _FIXED_ORDERS[self.problem]
            for name, v, ref in (("alpha", self.alpha, fixed[0]),
                                 ("beta", self.beta, fixed[1])):
                if v is not None and not math.isclose(v, ref):
                    raise ConfigError(name, f"problem {self.problem} fixes it to {ref}")
            return fixed
        if self.alpha is None or self.beta is None:
            raise ConfigError("alpha", "problem 4 requires explicit alpha and beta")
        return self.alpha, self.beta


def _parse_config_file(path):
    values = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError("config", str(exc))
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("config", f"line {lineno}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ConfigError("config", f"line {lineno}: unknown key {key!r}")
            values[key] = value
    return values


def _build_config(args):
    cfg = RunConfig()
    file_values = _parse_config_file(args.config) if args.config else {}

    def pick(key, cast, current, cli_value):
        if cli_value is not None:
            return cli_value
        if key in file_values:
            try:
                return cast(file_values[key])
            except ValueError:
                raise ConfigError(key, f"cannot parse {file_values[key]!r}")
        return current

    cfg = replace(
        cfg,
        problem=pick("problem", int, cfg.problem, args.problem),
        n1=pick("n1", int, cfg.n1, args.n1),
        n2=pick("n2", int, cfg.n2, args.n2),
        ng=pick("ng", int, cfg.ng, args.ng),
        lam=pick("lambda", float, cfg.lam, getattr(args, "lam", None)),
        memory_len=pick("L", float, cfg.memory_len, args.memory_len),
        alpha=pick("alpha", float, cfg.alpha, args.alpha),
        beta=pick("beta", float, cfg.beta, args.beta),
        eval_grid=pick("eval_grid", int, cfg.eval_grid, args.eval_grid),
        out=pick("out", str, cfg.out, args.out),
        cache_dir=pick("cache_dir", str, cfg.cache_dir, args.cache_dir),
    )
    cfg.validate()
    return cfg


def _check_out_path(out, field="out"):
    if out is None:
        raise ConfigError(field, "an output path is required")
    parent = os.path.dirname(os.path.abspath(out))
    if not os.path.isdir(parent):
        raise ConfigError(field, f"output directory does not exist: {parent}")


def _warn_memory_length(memory_len, alpha, beta):
    bound = 1.0 - min(alpha, beta)
    if memory_len <= bound:
        print(
            f"warning: L={memory_len} does not satisfy L > 1 - min(alpha, beta) "
            f"= {bound}; error bounds are not guaranteed",
            file=sys.stderr,
        )


def _run_once(cfg):
    """Solve for a config; returns (spec, result, report-or-None, reference)."""
    alpha, beta = cfg.resolved_orders()
    spec = catalog(cfg.problem, alpha, beta, memory_len=cfg.memory_len)
    _warn_memory_length(cfg.memory_len, alpha, beta)
    if alpha == 1.0 or beta == 1.0:
        raise ConfigError("alpha", "order 1 has no fractional differentiation "
                          "matrix; choose orders strictly below 1")
    result = solve_problem(spec, cfg.n1, cfg.n2, cfg.ng, cfg.lam,
                           cache_dir=cfg.cache_dir)
    reference = problem4_reference if (cfg.problem == 4 and spec.exact is None) else None
    if spec.exact is not None or reference is not None:
        report = error_report(spec, result.solution, cfg.eval_grid,
                              kappa=result.kappa, elapsed=result.elapsed,
                              reference=reference)
    else:
        report = None
    return spec, result, report, reference


def cmd_solve(args):
    cfg = _build_config(args)
    _check_out_path(cfg.out)
    spec, result, report, reference = _run_once(cfg)

    xs = np.linspace(0.0, spec.period_x, cfg.eval_grid)
    ts = np.linspace(0.0, spec.period_t, cfg.eval_grid)
    approx = tensor_interpolate_grid(result.solution, xs, ts)
    truth = spec.exact if spec.exact is not None else reference
    with open(cfg.out, "w") as fh:
        fh.write("x,t,u_exact,u_approx,abs_err\n")
        for i, x in enumerate(xs):
            for j, t in enumerate(ts):
                if truth is None:
                    fh.write(f"{x:.17g},{t:.17g},,{approx[i, j]:.17g},\n")
                else:
                    exact = truth(x, t)
                    fh.write(
                        f"{x:.17g},{t:.17g},{exact:.17g},{approx[i, j]:.17g},"
                        f"{abs(approx[i, j] - exact):.17g}\n"
                    )
    if args.plot:
        from .plots import render_solution_figure

        fig_path = os.path.splitext(cfg.out)[0] + ".png"
        render_solution_figure(spec, result.solution, fig_path,
                               m=cfg.eval_grid, reference=reference)

    max_err = report.max_abs_err if report else float("nan")
    rms_err = report.rms_err if report else float("nan")
    print(
        f"max_err={max_err:.17g} rms_err={rms_err:.17g} "
        f"kappa={result.kappa:.17g} elapsed_ms={result.elapsed * 1e3:.3f}"
    )
    return 0


def cmd_fdm(args):
    if args.n < 2 or args.n % 2 != 0:
        raise ConfigError("n", f"must be a positive even integer, got {args.n}")
    if args.period <= 0.0:
        raise ConfigError("period", f"must be positive, got {args.period}")
    if not 0.0 < args.gamma < 1.0:
        raise ConfigError("gamma", f"must lie in (0, 1), got {args.gamma}")
    if args.memory_len <= 0.0:
        raise ConfigError("L", f"must be positive, got {args.memory_len}")
    if args.ng < 1:
        raise ConfigError("ng", f"must be >= 1, got {args.ng}")
    if args.lam <= -0.5:
        raise ConfigError("lambda", f"must exceed -1/2, got {args.lam}")
    _check_out_path(args.out)
    _warn_memory_length(args.memory_len, args.gamma, args.gamma)
    rule = quadrature_rule(args.ng, args.lam)
    matrix = build_fdm(PeriodicGrid(args.period, args.n), rule,
                       args.gamma, args.memory_len)
    save_fdm(matrix, rule, args.out)
    print(f"wrote {2 * args.n - 1} diagonal values to {args.out}")
    return 0


def cmd_convergence(args):
    cfg = _build_config(args)
    _check_out_path(cfg.out)
    if not args.values:
        raise ConfigError("values", "sweep value list must not be empty")
    rows = []
    for value in args.values:
        if args.sweep == "ng":
            run_cfg = replace(cfg, ng=int(value))
        elif args.sweep == "n1n2":
            run_cfg = replace(cfg, n1=int(value), n2=int(value))
        else:  # alpha-beta, problem 4's limit study
            if cfg.problem != 4:
                raise ConfigError("sweep", "alpha-beta sweeps apply to problem 4")
            run_cfg = replace(cfg, alpha=float(value), beta=float(value))
        run_cfg.validate()
        _, result, report, _ = _run_once(run_cfg)
        if report is None:
            raise ConfigError("sweep", "swept problem has no error reference")
        rows.append((args.sweep, float(value), report.max_abs_err,
                     report.rms_err, result.kappa, result.elapsed * 1e3))
    with open(cfg.out, "w") as fh:
        fh.write("param,value,max_err,rms_err,kappa,elapsed_ms\n")
        for param, value, max_err, rms_err, kappa, ms in rows:
            fh.write(f"{param},{value:.17g},{max_err:.17g},{rms_err:.17g},"
                     f"{kappa:.17g},{ms:.3f}\n")
    if args.plot:
        from .plots import render_convergence_figure

        fig_path = os.path.splitext(cfg.out)[0] + ".png"
        render_convergence_figure(args.sweep, [r[1] for r in rows],
                                  [r[2] for r in rows], fig_path)
    for param, value, max_err, _, _, _ in rows:
        print(f"{param}={value:g} max_err={max_err:.3e}")
    return 0


def cmd_oracle_check(args):
    cfg = _build_config(args)
    alpha, beta = cfg.resolved_orders()
    spec = catalog(cfg.problem, alpha, beta, memory_len=cfg.memory_len)
    rule = quadrature_rule(cfg.ng, cfg.lam)
    battery = [
        ("sin", np.sin, np.cos),
        ("cos", np.cos, lambda s: -np.sin(s)),
        ("const", lambda s: np.ones_like(s), lambda s: np.zeros_like(s)),
    ]
    threshold = 1e-8
    checks = [(g, False) for g in sorted({alpha, beta})] + [(0.999, True)]
    failed = False
    for gamma, informational in checks:
        grid = PeriodicGrid(spec.period_x, cfg.n1)
        matrix = build_fdm(grid, rule, gamma, cfg.memory_len)
        for name, func, deriv in battery:
            approx = apply_fd(matrix, func(grid.nodes))
            oracle = np.array([
                fd_oracle(deriv, gamma, cfg.memory_len, x, tol=1e-12)
                for x in grid.nodes
            ])
            disc = float(np.abs(approx - oracle).max())
            if informational:
                print(f"gamma={gamma:g} fn={name} max_disc={disc:.3e} (informational)")
            else:
                ok = disc <= threshold
                failed = failed or not ok
                print(f"gamma={gamma:g} fn={name} max_disc={disc:.3e} "
                      f"{'pass' if ok else 'FAIL'}")
    return 1 if failed else 0


def _add_config_options(parser):
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--problem", type=int, help="benchmark problem id (1-4)")
    parser.add_argument("--n1", type=int, help="spatial grid size (even)")
    parser.add_argument("--n2", type=int, help="temporal grid size (even)")
    parser.add_argument("--ng", type=int, help="quadrature node count minus one")
    parser.add_argument("--lambda", dest="lam", type=float,
                        help="Gegenbauer index (> -1/2)")
    parser.add_argument("--L", dest="memory_len", type=float,
                        help="sliding memory length")
    parser.add_argument("--alpha", type=float, help="spatial fractional order")
    parser.add_argument("--beta", type=float, help="temporal fractional order")
    parser.add_argument("--eval-grid", dest="eval_grid", type=int,
                        help="evaluation grid size per axis")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--cache-dir", dest="cache_dir",
                        help="directory for FDM cache files")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fgps",
        description="Fourier-Gegenbauer pseudospectral solver for fractional "
                    "PDEs with periodic solutions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a benchmark problem")
    _add_config_options(p_solve)
    p_solve.add_argument("--plot", action="store_true",
                         help="also render a figure next to the CSV")
    p_solve.set_defaults(func=cmd_solve)

    p_fdm = sub.add_parser("fdm", help="build and cache a differentiation matrix")
    p_fdm.add_argument("--n", type=int, required=True)
    p_fdm.add_argument("--period", type=float, required=True)
    p_fdm.add_argument("--gamma", type=float, required=True)
    p_fdm.add_argument("--L", dest="memory_len", type=float, required=True)
    p_fdm.add_argument("--ng", type=int, default=1000)
    p_fdm.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_fdm.add_argument("--out", required=True)
    p_fdm.set_defaults(func=cmd_fdm)

    p_conv = sub.add_parser("convergence", help="sweep a parameter and record errors")
    _add_config_options(p_conv)
    p_conv.add_argument("--sweep", choices=("ng", "n1n2", "alpha-beta"),
                        required=True)
    p_conv.add_argument("--values", type=lambda s: [v for v in s.split(",") if v],
                        required=True, help="comma-separated sweep values")
    p_conv.add_argument("--plot", action="store_true",
                        help="also render a figure next to the CSV")
    p_conv.set_defaults(func=cmd_convergence)

    p_check = sub.add_parser("oracle-check",
                             help="compare matrix application against the "
                                  "quadrature reference")
    _add_config_options(p_check)
    p_check.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
