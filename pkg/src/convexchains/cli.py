"""Command-line front end.

Exit codes: 0 success, 1 property violation, 2 usage or parse error,
3 point outside the triangle, 4 unwritable output.
"""
from __future__ import annotations

import sys

import click

from . import experiments as ex
from . import records
from .chain_solver import ChainInstance, InstanceError, longest_chain_banded, longest_chain_exact
from .geometry import GeometryError, Triangle, standard_triangle

EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_OUTSIDE = 3
EXIT_UNWRITABLE = 4


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_triangle(spec: str) -> Triangle:
    if spec.strip().lower() == "standard":
        return standard_triangle()
    try:
        coords = [float(v) for v in spec.replace(",", " ").split()]
        return Triangle.from_coords(coords)
    except (ValueError, GeometryError) as err:
        raise click.BadParameter(f"{spec!r}: {err}", param_hint="--triangle") from None


def _open_out(path: str):
    try:
        return open(path, "w", newline="")
    except OSError as err:
        _fail(EXIT_UNWRITABLE, f"cannot write {path}: {err.strerror}")


@click.group()
def main():
    """Longest convex chains in random point sets."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(dir_okay=False))
@click.option("--triangle", default="standard", show_default=True, help='"standard" or "x0 y0 x1 y1 x2 y2".')
@click.option("--band", type=float, default=None, help="Only search points this close to the parabola.")
def solve(input_path, triangle, band):
    """Longest convex chain of the points in a file."""
    T = _parse_triangle(triangle)
    try:
        pts = records.read_points(input_path)
    except records.PointFileError as err:
        _fail(EXIT_USAGE, f"{input_path}: {err}")
    except OSError as err:
        _fail(EXIT_USAGE, f"cannot read {input_path}: {err.strerror}")
    try:
        inst = ChainInstance(T, pts)
    except InstanceError as err:
        _fail(EXIT_OUTSIDE, str(err))
    if band is not None and band <= 0:
        raise click.BadParameter("must be positive", param_hint="--band")
    chain = longest_chain_exact(inst) if band is None else longest_chain_banded(inst, band)
    click.echo(records.dumps(records.chain_record(chain.length, chain.indices)))


@main.command()
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--reps", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), required=True)
@click.option("--model", type=click.Choice(["uniform", "poisson"]), default="uniform", show_default=True)
@click.option("--band", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
def simulate(n, reps, seed, model, band, out, threads):
    """Monte Carlo distribution of the longest chain length."""
    fh = _open_out(out)
    cfg = ex.ExperimentConfig(n=n, replicates=reps, master_seed=seed, model=model, band=band, threads=threads)
    summary = ex.run_length_experiment(cfg)
    with fh:
        records.write_simulation(fh, summary)
    for w in summary.warnings:
        click.echo(f"warning: {w}", err=True)
    click.echo(records.dumps(records.summary_record(summary, with_elapsed=True)))


@main.group()
def probability():
    """Empirical versus exact probabilities."""


def _echo_estimate(kind: str, size_key: str, size: int, seed: int, est: ex.ProbabilityEstimate):
    click.echo(
        records.dumps(
            {
                "schema": records.SCHEMA_VERSION,
                "kind": kind,
                size_key: size,
                "replicates": est.replicates,
                "seed": seed,
                "estimate": est.estimate,
                "exact": est.exact,
                "stdError": est.std_error,
            }
        )
    )


@probability.command("chain")
@click.option("--k", type=click.IntRange(min=1), required=True)
@click.option("--reps", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), required=True)
def probability_chain(k, reps, seed):
    """k uniform points in the triangle forming a convex chain."""
    _echo_estimate("chain", "k", k, seed, ex.run_chain_probability_trial(k, reps, seed))


@probability.command("convex-position")
@click.option("--n", type=click.IntRange(min=3), required=True)
@click.option("--reps", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), required=True)
def probability_convex_position(n, reps, seed):
    """n uniform points in the unit square being in convex position."""
    _echo_estimate("convex-position", "n", n, seed, ex.run_convex_position_trial(n, reps, seed))


@main.command("geometry-check")
@click.option("--samples", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), required=True)
def geometry_check(samples, seed):
    """Random-input checks of the parabola and tangent-triangle identities."""
    results = ex.run_geometry_checks(samples, seed)
    for r in results:
        click.echo(f"{r.name}: {r.passed}/{r.checked} {'PASS' if r.ok else 'FAIL'}")
        for c in r.counterexamples:
            click.echo(f"  counterexample: {c}")
    if not all(r.ok for r in results):
        sys.exit(EXIT_VIOLATION)


@main.command("limit-shape")
@click.option("--n", type=click.IntRange(min=1), required=True)
@click.option("--reps", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=click.IntRange(0, (1 << 64) - 1), required=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--band", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True)
def limit_shape(n, reps, seed, out, band, threads):
    """Hausdorff distance of longest chains to the special parabola."""
    fh = _open_out(out)
    cfg = ex.ExperimentConfig(n=n, replicates=reps, master_seed=seed, band=band, threads=threads)
    res = ex.run_limit_shape_experiment(cfg)
    with fh:
        records.write_limit_shape(fh, res)
    click.echo(records.dumps(records.limit_shape_record(res)))


if __name__ == "__main__":
    main()
