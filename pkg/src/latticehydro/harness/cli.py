"""Command-line entry point.

Every subcommand reads the experiment file given by --config (YAML or JSON
with the keys of ExperimentConfig), applies the global overrides, runs, and
writes a row CSV plus a JSON summary under --out.  The process exits
nonzero iff any verdict of the experiment failed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from ..pde import (
    Grid,
    integrate_lambda,
    make_grid,
    phi,
    solve_dissipative,
    solve_exclusion_pde,
    solve_fullline_zr_pde,
)
from .config import ExperimentConfig, load_config
from .experiments import (
    _fullline_profile,
    run_experiment,
    run_simulation,
)
from .report import emit_report


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="Experiment file (YAML/JSON) with ExperimentConfig keys.")
@click.option("--seed", type=int, default=None, help="Override the base seed.")
@click.option("--out", type=click.Path(), default=None,
              help="Output directory (default: the config's `out`, else ./results).")
@click.option("--workers", type=int, default=None,
              help="Replica fan-out; shared-nothing workers, ordered reduce (default 1).")
@click.option("--rb", type=float, default=None,
              help="Boundary jump rate r_b (default 1; use 0.5 for the flip-rate convention).")
@click.pass_context
def main(ctx, config_path, seed, out, workers, rb):
    """Particle-system simulators and hydrodynamic-limit checks.

    \b
    Config keys and defaults (YAML or JSON):
      kind            experiment kind (required for `hydro`/`simulate`)
      N / n_list      lattice scales, strictly increasing (required)
      T               macroscopic horizon (required)
      replicas=1      independent runs per N ; seed=0 base seed
      r_b=1.0         boundary jump rate (0.5 = flip-rate convention)
      rho0, zeta0     initial profiles {kind, params, support}
      du=0.005        PDE spacing ; cfl_safety=0.6 ; n_times=2 save times
      dictionary=default   8 smooth bumps + 2 ramps per side
      block_eps=0.05  block-average width ; tolerance=None distance bound
      out=results     output directory ; workers=1 replica fan-out
      mode=basic      coupling mode (basic|stirring) ; k_sets crossing sets
      alpha           equilibrium density (stationarity) ; level=0.01
    """
    ctx.ensure_object(dict)
    ctx.obj.update(
        config_path=config_path, seed=seed, out=out, workers=workers, r_b=rb
    )


def _load(ctx, expected_kinds=None, force_kind=None) -> ExperimentConfig:
    over = {k: v for k, v in ctx.obj.items()
            if k in ("seed", "out", "workers", "r_b") and v is not None}
    if force_kind is not None:
        over["kind"] = force_kind
    path = ctx.obj.get("config_path")
    if path is None:
        raise click.UsageError("--config is required")
    cfg = load_config(path, **over)
    if expected_kinds and cfg.kind not in expected_kinds:
        raise click.UsageError(
            f"config kind {cfg.kind!r} does not fit this command "
            f"(expected one of {expected_kinds})"
        )
    return cfg


def _finish(cfg: ExperimentConfig, report) -> None:
    csv_path, json_path = emit_report(report, cfg.out)
    click.echo(f"wrote {csv_path} and {json_path}")
    for name, ok in report.verdicts.items():
        click.echo(f"  [{'PASS' if ok else 'FAIL'}] {name}")
    for w in report.warnings:
        click.echo(f"  [warn] {w}")
    if not report.passed():
        sys.exit(1)


@main.command()
@click.pass_context
def hydro(ctx):
    """Empirical-measure convergence (kinds hydro-exclusion / hydro-zr)."""
    cfg = _load(ctx, expected_kinds=("hydro-exclusion", "hydro-zr"))
    _finish(cfg, run_experiment(cfg))


@main.command("potts-check")
@click.pass_context
def potts_check(ctx):
    """Rescaled-interface convergence toward the height profile."""
    cfg = _load(ctx, force_kind="potts-profile")
    _finish(cfg, run_experiment(cfg))


@main.command()
@click.pass_context
def front(ctx):
    """Front displacement X_T/N against the lost-mass integral."""
    cfg = _load(ctx, force_kind="front")
    _finish(cfg, run_experiment(cfg))


@main.command()
@click.pass_context
def flux(ctx):
    """Origin-activity integral: T/sqrt(N) bound and the v_t link."""
    cfg = _load(ctx, force_kind="flux")
    _finish(cfg, run_experiment(cfg))


@main.command()
@click.pass_context
def couple(ctx):
    """Order preservation of coupled ordered pairs."""
    cfg = _load(ctx, force_kind="coupling")
    _finish(cfg, run_experiment(cfg))


@main.command()
@click.pass_context
def stationarity(ctx):
    """Equilibrium check for the reflected zero-range chain."""
    cfg = _load(ctx, force_kind="stationarity")
    _finish(cfg, run_experiment(cfg))


@main.command()
@click.pass_context
def simulate(ctx):
    """Raw trajectory runs with dictionary pairings (no verdicts)."""
    cfg = _load(ctx)
    _finish(cfg, run_simulation(cfg))


@main.command()
@click.pass_context
def solve(ctx):
    """Solve the limiting equations for the configured profiles.

    Writes per-field CSVs (t, u, value), the series CSV (t, a, v) and a
    grid-metadata sidecar JSON into the output directory.
    """
    cfg = _load(ctx)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    saves = cfg.schedule
    a_bound = phi(max(float(np.max(cfg.rho0(np.linspace(cfg.z_lo, 0, 801)))), 1.0)) / cfg.du

    grid_l, _ = make_grid(cfg.z_lo, 0.0, cfg.du, cfg.T, cfg.n_times,
                          a_bound=a_bound, safety=cfg.cfl_safety)
    sol_l = solve_dissipative(cfg.rho0, grid_l, saves)
    _write_field(out / "rho.csv", saves, grid_l.centers, sol_l.profiles)
    _write_series(out / "series.csv", sol_l, saves)
    sidecar = {
        "du": cfg.du, "dt": grid_l.dt, "domain": [cfg.z_lo, 0.0],
        "T": cfg.T, "scheme": sol_l.meta["scheme"],
        "fields": {"rho": {"domain": [cfg.z_lo, 0.0]}},
    }

    if cfg.zeta0 is not None:
        grid_z = Grid(0.0, cfg.e_hi, cfg.du, grid_l.dt, cfg.T)
        sol_z = solve_exclusion_pde(cfg.zeta0, sol_l, grid_z, saves)
        _write_field(out / "zeta.csv", saves, grid_z.centers, sol_z.profiles)
        rho_full, r_hi = _fullline_profile(cfg)
        grid_f = Grid(cfg.z_lo, r_hi, cfg.du, grid_l.dt, cfg.T)
        sol_f = solve_fullline_zr_pde(rho_full, grid_f, saves)
        faces, lam = integrate_lambda(sol_f)
        _write_field(out / "lambda.csv", saves, faces, lam)
        sidecar["fields"]["zeta"] = {"domain": [0.0, cfg.e_hi]}
        sidecar["fields"]["lambda"] = {"domain": [cfg.z_lo, r_hi]}

    (out / "grid.json").write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")
    click.echo(f"wrote {', '.join(sidecar['fields'])} under {out}")


def _write_field(path: Path, times, us, profiles) -> None:
    lines = ["t,u,value"]
    for t, prof in zip(times, profiles):
        for u, v in zip(us, prof):
            lines.append(f"{float(t)!r},{float(u)!r},{float(v)!r}")
    path.write_text("\n".join(lines) + "\n")


def _write_series(path: Path, sol, times) -> None:
    lines = ["t,a,v"]
    for t in times:
        k = sol.grid.step_index(float(t))
        a = sol.a_series[min(k, sol.a_series.size - 1)] if sol.a_series.size else 0.0
        lines.append(f"{float(t)!r},{float(a)!r},{float(sol.v_series[k])!r}")
    path.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
