"""Command-line front end.

Usage:
    walkarea area --n 8 --format csv
    walkarea lambda --n 6
    walkarea kreft --p 1 --q 3 --j 2 --mode extrapolated
    walkarea trace --n 6 --p 1 --q 4 --method all
    walkarea verify --n-max 12

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 a
cross-check disagreed, 2 bad arguments.  Set ``WALKAREA_CACHE`` to a file
path to cache results as JSON lines.
"""

from __future__ import annotations

import csv
import io
import os
import sys
import time

import click

from . import __version__
from .area_enum import enumerate_areas, evaluate_at_flux, first_order_q, lambda_table
from .envelope import ResultCache, ResultEnvelope, counts_from_payload, counts_payload
from .hofstadter import trace_formula, trace_matrix, trace_partition, verify_moment_identity
from .kreft import (
    kreft_closed_form,
    kreft_coefficient,
    kreft_direct,
    kreft_extrapolated,
    kreft_series,
)
from .structures import RationalFlux, coprime_fluxes, isclose
from .walk_oracle import oracle_areas, oracle_areas_by_steps

__all__ = ["cli", "main"]

MAX_N_ENV = "WALKAREA_MAX_N"
DEFAULT_MAX_N = 20
VERIFY_MAX_N = 14
VERIFY_MAX_Q = 8

FORMATS = click.Choice(["table", "csv", "json"])


def _fmt(x: float) -> str:
    if abs(x - round(x)) <= 1e-9 * max(1.0, abs(x)):
        return str(int(round(x)))
    return f"{x:.15g}"


def _flux(p: int, q: int) -> RationalFlux:
    try:
        return RationalFlux(p, q)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _even(n: int, name: str = "--n", lo: int = 2, hi: int | None = None) -> None:
    if n % 2:
        raise click.UsageError(f"{name} must be even, got {n}")
    if n < lo or (hi is not None and n > hi):
        raise click.UsageError(f"{name} must lie in [{lo}, {hi}], got {n}")


def _cached(ctx: click.Context, command: str, params: dict, compute) -> ResultEnvelope:
    cache = ResultCache.from_env()
    if cache is not None:
        hit = cache.get(command, params)
        if hit is not None:
            click.echo(f"cache hit: {command} {params}", err=True)
            return hit
    envelope = ResultEnvelope(command, params, compute())
    if cache is not None:
        cache.put(envelope)
    return envelope


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


@click.group()
@click.version_option(__version__, prog_name="walkarea")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker processes for the composition sums.")
@click.pass_context
def cli(ctx: click.Context, threads: int) -> None:
    """Exact closed-walk area enumeration and Hofstadter cross-checks."""
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Walk length (even).")
@click.option("--format", "fmt", type=FORMATS, default="csv", show_default=True)
@click.option("--max-n", type=int, default=lambda: int(os.environ.get(MAX_N_ENV, DEFAULT_MAX_N)),
              show_default=f"{DEFAULT_MAX_N}, or ${MAX_N_ENV}")
@click.pass_context
def area(ctx: click.Context, n: int, fmt: str, max_n: int) -> None:
    """Print C_n(A) for A >= 0 (C_n(-A) = C_n(A))."""
    _even(n, hi=max_n)
    env = _cached(ctx, "area", {"n": n},
                  lambda: counts_payload(enumerate_areas(n, ctx.obj["threads"]).half()))
    if fmt == "json":
        click.echo(env.to_json())
        return
    rows = [[str(a), str(c)] for a, c in sorted(counts_from_payload(env.payload).items())]
    if fmt == "csv":
        click.echo(f"# closed walks of length {n}; C_n(-A) = C_n(A)")
        click.echo(_csv(["A", "count"], rows))
    else:
        click.echo(f"closed walks of length {n} by algebraic area (symmetric: C_n(-A) = C_n(A))")
        click.echo(_table(["A", "C_n(A)"], rows))


@cli.command(name="lambda")
@click.option("--n", "n", type=int, required=True, help="Walk length (even).")
@click.option("--format", "fmt", type=FORMATS, default="table", show_default=True)
@click.pass_context
def lambda_cmd(ctx: click.Context, n: int, fmt: str) -> None:
    """Print C_{m,m,n/2-m,n/2-m}(A): rows m (right steps), columns A."""
    _even(n, hi=DEFAULT_MAX_N)

    def compute():
        return {str(m): counts_payload(d.counts) for m, d in lambda_table(n, ctx.obj["threads"]).items()}

    env = _cached(ctx, "lambda", {"n": n}, compute)
    if fmt == "json":
        click.echo(env.to_json())
        return
    table = {int(m): counts_from_payload(row) for m, row in env.payload.items()}
    areas = sorted({a for row in table.values() for a in row})
    header = ["m"] + [str(a) for a in areas] + ["total"]
    rows = []
    for m in sorted(table):
        row = table[m]
        rows.append([str(m)] + [str(row.get(a, 0)) for a in areas] + [str(sum(row.values()))])
    col_totals = [sum(table[m].get(a, 0) for m in table) for a in areas]
    rows.append(["total"] + [str(c) for c in col_totals] + [str(sum(col_totals))])
    click.echo(_csv(header, rows) if fmt == "csv" else _table(header, rows))


KREFT_MODES = ["auto", "direct", "extrapolated", "series", "closed-form"]


def _kreft_value(mode: str, flux: RationalFlux, j: int) -> float:
    if mode == "auto":
        return kreft_coefficient(flux, j)
    if mode == "direct":
        return kreft_direct(flux, j)
    if mode == "extrapolated":
        return kreft_extrapolated(flux, j)
    if mode == "series":
        return kreft_series(flux, j)
    return kreft_closed_form(j).evaluate(flux)


@cli.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--j", "j", type=click.IntRange(min=1), required=True, help="Order: prints a_{p,q}(2j).")
@click.option("--mode", type=click.Choice(KREFT_MODES), default="auto", show_default=True)
@click.option("--all", "show_all", is_flag=True, help="Compare every applicable mode.")
def kreft(p: int, q: int, j: int, mode: str, show_all: bool) -> None:
    """Print the Kreft coefficient a_{p,q}(2j)."""
    flux = _flux(p, q)
    if not show_all:
        try:
            value = _kreft_value(mode, flux, j)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
        click.echo(_fmt(value))
        return
    values = {}
    for m in KREFT_MODES[1:]:
        try:
            values[m] = _kreft_value(m, flux, j)
        except ValueError:
            continue
    for m, v in values.items():
        click.echo(f"{m:>13}  {_fmt(v)}")
    ref = next(iter(values.values()))
    ok = all(isclose(v, ref) for v in values.values())
    click.echo("agree" if ok else "DISAGREE")
    if not ok:
        sys.exit(1)


TRACE_METHODS = ["areas", "formula", "partition", "matrix", "first-order", "all"]


@cli.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--method", type=click.Choice(TRACE_METHODS), default="areas", show_default=True)
@click.pass_context
def trace(ctx: click.Context, n: int, p: int, q: int, method: str) -> None:
    """Print the moment Tr H^n = Z_n(exp(2 i pi p/q))."""
    _even(n, hi=DEFAULT_MAX_N)
    flux = _flux(p, q)
    threads = ctx.obj["threads"]
    if method == "all":
        report = verify_moment_identity(n, flux, enumerate_areas(n, threads))
        for name, v in report.values.items():
            click.echo(f"{name:>12}  {_fmt(v)}")
        click.echo(f"max relative deviation {report.max_deviation:.3e}")
        if not report.passed:
            click.echo("DISAGREE", err=True)
            sys.exit(1)
        return
    if method == "areas":
        value = evaluate_at_flux(enumerate_areas(n, threads), flux).real
    elif method == "formula":
        value = trace_formula(n, flux)
    elif method == "partition":
        value = trace_partition(n, flux)
    elif method == "matrix":
        if q > 16:
            raise click.UsageError("matrix method supports q <= 16")
        value = trace_matrix(n, flux)
    else:
        value = n * first_order_q(n, threads).evaluate(flux)
    click.echo(_fmt(value))


@cli.command()
@click.option("--n-max", type=int, required=True, help="Largest (even) walk length to check.")
@click.option("--q-max", type=click.IntRange(1, 16), default=VERIFY_MAX_Q, show_default=True)
@click.pass_context
def verify(ctx: click.Context, n_max: int, q_max: int) -> None:
    """Check the formula against the oracle and the trace identities."""
    _even(n_max, name="--n-max", hi=VERIFY_MAX_N)
    threads = ctx.obj["threads"]
    start = time.perf_counter()
    failures = []
    fluxes = coprime_fluxes(q_max)
    for n in range(2, n_max + 1, 2):
        got = enumerate_areas(n, threads)
        want = oracle_areas(n)
        if got != want:
            failures.append(f"n={n}: areas differ: formula {dict(got.counts)} oracle {dict(want.counts)}")
        lam = lambda_table(n, threads)
        lam_want = oracle_areas_by_steps(n)
        for m in lam_want:
            if lam[m] != lam_want[m]:
                failures.append(
                    f"n={n} m={m}: lambda table differs: {dict(lam[m].counts)} vs {dict(lam_want[m].counts)}"
                )
        worst = 0.0
        for flux in fluxes:
            report = verify_moment_identity(n, flux, got)
            worst = max(worst, report.max_deviation)
            if not report.passed:
                failures.append(f"n={n} flux={flux}: moment routes disagree {report.values}")
        click.echo(f"n={n:2d}  areas {'ok' if got == want else 'FAIL'}  "
                   f"lambda {'ok' if all(lam[m] == lam_want[m] for m in lam_want) else 'FAIL'}  "
                   f"moments max dev {worst:.1e} over {len(fluxes)} fluxes")
    click.echo(f"runtime {time.perf_counter() - start:.2f} s", err=True)
    if failures:
        for line in failures:
            click.echo(line, err=True)
        sys.exit(1)
    click.echo("all checks passed")


def main() -> None:
    cli(obj={})


if __name__ == "__main__":
    main()
