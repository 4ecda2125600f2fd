import os
import sys
import argparse
import logging

try:
    from rich.console import Console
    from rich.table import Table
    from rich.panel import Panel
    from rich.progress import Progress, SpinnerColumn, BarColumn, TextColumn
    from rich import box
except ImportError:
    print("Error: The 'rich' library is required for the CLI but not installed.", file=sys.stderr)
    print("Please install it with: pip install extrapbench[cli] (or uv sync --extra cli)", file=sys.stderr)
    sys.exit(1)

from extrapbenchlib import __version__
from extrapbenchlib.config import EXTRAP_METHODS, STEPPERS, load_matrix_config, spec_from_config
from extrapbenchlib.errors import ConfigError, ConfigIOError, ExtrapBenchError
from extrapbenchlib.events import EXPERIMENT_COMPLETE, EventBus
from extrapbenchlib.experiments import (
    DEFAULT_MAX_N,
    FIGURE_SETS,
    TABLES,
    figure_specs,
    table_specs,
    with_outputs,
)
from extrapbenchlib.logging_setup import level_from_env, setup_logging
from extrapbenchlib.models import RunStatus
from extrapbenchlib.reports import method_label, report_row, write_report_csv
from extrapbenchlib.runner import run_experiment, run_matrix

console = Console()

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2

DEFAULT_JOBS = min(os.cpu_count() or 1, 8)


def positive_int(value):
    ivalue = int(value)
    if ivalue <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return ivalue


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Restarted vector extrapolation benchmarks (RRE, MPE, VEA on GD/PGD/SGD)",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"extrapbench {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="Log run progress at INFO level (overrides BENCH_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a single experiment",
                         formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    run.add_argument("--problem", choices=["bratu", "sparse"], default="bratu")
    run.add_argument("--n", type=positive_int, default=100,
                     help="Grid points per direction (bratu) or unknowns (sparse)")
    run.add_argument("--alpha", type=float, default=0.0, help="Bratu convection coefficient")
    run.add_argument("--lambda", dest="lam", type=float, default=0.0,
                     help="Bratu nonlinearity coefficient")
    run.add_argument("--stepper", choices=STEPPERS, default="pgd")
    run.add_argument("--extrap", choices=EXTRAP_METHODS, default=None,
                     help="Restarted extrapolation method (omit for the plain stepper)")
    run.add_argument("--q", type=positive_int, default=1, help="Restart length")
    run.add_argument("--tol", type=float, default=1e-5,
                     help="Relative successive-iterate tolerance")
    run.add_argument("--itermax", type=int, default=500, help="Maximum inner steps")
    run.add_argument("--tau0", type=float, default=1.0, help="Initial Armijo step")
    run.add_argument("--omega", type=float, default=None,
                     help="Armijo constant (default 1e-4 for gd/pgd/gn, 0.5 for sgd)")
    run.add_argument("--x0", choices=["zeros", "random"], default="zeros", help="Initial guess")
    run.add_argument("--seed", type=int, default=0, help="Seed for --x0 random")
    run.add_argument("--out", default=None, help="Report CSV path")
    run.add_argument("--history", default=None, help="Convergence history CSV path")

    matrix = sub.add_parser("matrix", help="Run a TOML experiment matrix",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    matrix.add_argument("--config", required=True,
                        help="TOML file with an optional [defaults] table and [[experiment]] entries")
    matrix.add_argument("--jobs", type=positive_int, default=DEFAULT_JOBS)
    matrix.add_argument("--out", required=True, help="Aggregated report CSV path")

    tables = sub.add_parser("tables", help="Run the canned benchmark tables",
                            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    tables.add_argument("--which", type=int, choices=TABLES, required=True)
    tables.add_argument("--out", required=True, help="Output directory")
    tables.add_argument("--max-n", dest="max_n", type=positive_int, default=DEFAULT_MAX_N,
                        help="Skip sparse grids larger than this (table 3)")
    tables.add_argument("--jobs", type=positive_int, default=DEFAULT_JOBS)

    figures = sub.add_parser("figures", help="Run the convergence-history sets behind the figures",
                             formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    figures.add_argument("--which", choices=FIGURE_SETS, required=True)
    figures.add_argument("--out", required=True, help="Output directory")
    figures.add_argument("--jobs", type=positive_int, default=DEFAULT_JOBS)

    return parser


def _fmt_re(value):
    return "n/a" if value is None else f"{value:.2e}"


def print_rows(rows, title):
    table = Table(box=box.ROUNDED, title=title, title_justify="left")
    table.add_column("Problem", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("α", justify="right")
    table.add_column("λ", justify="right")
    table.add_column("Method", style="bold")
    table.add_column("Status", justify="center")
    table.add_column("Iter", justify="right")
    table.add_column("Cycles", justify="right")
    table.add_column("RE", justify="right", style="bold green")
    table.add_column("CPU(s)", justify="right", style="dim")

    status_style = {
        RunStatus.CONVERGED.value: "[green]converged[/]",
        RunStatus.NON_CONVERGENCE.value: "[yellow]non-conv[/]",
        RunStatus.FAILED.value: "[red]failed[/]",
    }
    for row in rows:
        table.add_row(
            row["problem"],
            str(row["n"]),
            f"{row['alpha']:g}",
            f"{row['lambda']:g}",
            row.get("label", ""),
            status_style.get(row["status"], row["status"]),
            str(row["iterations"]),
            str(row["cycles"]),
            _fmt_re(row["relative_error"]),
            f"{row['wall_seconds']:.3f}",
        )
    console.print(table)

    for row in rows:
        if row["status"] == RunStatus.FAILED.value and row.get("message"):
            console.print(f"  [red]⚠ {row.get('label', '')}: {row['message']}[/]")


def cmd_run(args):
    spec = spec_from_config({
        "problem": args.problem, "n": args.n, "alpha": args.alpha, "lam": args.lam,
        "stepper": args.stepper, "extrap": args.extrap, "q": args.q,
        "tol": args.tol, "itermax": args.itermax, "tau0": args.tau0,
        "omega": args.omega, "x0": args.x0, "seed": args.seed,
        "report_path": args.out, "history_path": args.history,
    })
    label = method_label(spec)
    try:
        report = run_experiment(spec)
        row = report_row(spec, report)
        row["message"] = report.message
    except ExtrapBenchError as e:
        # solver failures are recorded, not fatal
        row = report_row(spec, None, status=RunStatus.FAILED.value)
        row["message"] = str(e)
        if args.out:
            write_report_csv([row], args.out)
    row["label"] = label
    print_rows([row], f"{label} on {spec.problem}")
    if args.out:
        console.print(f"\n[dim]Report saved to: {args.out}[/]")
    return EXIT_OK


def run_with_progress(specs, jobs, out, description):
    bus = EventBus()
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        console=console,
    ) as progress:
        task_id = progress.add_task(f"[cyan]{description}", total=len(specs))

        def on_complete(**data):
            progress.advance(task_id)
        bus.subscribe(EXPERIMENT_COMPLETE, on_complete)
        rows = run_matrix(specs, parallelism=jobs, out=out, bus=bus)
    return rows


def cmd_matrix(args):
    specs = load_matrix_config(args.config)
    console.print(Panel.fit(
        f"[bold]extrapbench matrix[/]\n"
        f"Config: [cyan]{args.config}[/] | Experiments: [cyan]{len(specs)}[/] | Jobs: [cyan]{args.jobs}[/]",
        title="Configuration",
    ))
    rows = run_with_progress(specs, args.jobs, args.out, "Running experiments...")
    print_rows(rows, "Results")
    console.print(f"\n[dim]Report saved to: {args.out}[/]")
    return EXIT_OK


def _run_canned(specs, name, out_dir, jobs):
    history_dir = os.path.join(out_dir, name)
    os.makedirs(history_dir, exist_ok=True)
    out = os.path.join(out_dir, f"{name}.csv")
    rows = run_with_progress(with_outputs(specs, history_dir), jobs, out, f"Running {name}...")
    print_rows(rows, name)
    console.print(f"\n[dim]Report saved to: {out}[/]")
    console.print(f"[dim]Histories saved to: {history_dir}[/]")
    return EXIT_OK


def cmd_tables(args):
    return _run_canned(table_specs(args.which, args.max_n), f"table{args.which}", args.out, args.jobs)


def cmd_figures(args):
    return _run_canned(figure_specs(args.which), args.which, args.out, args.jobs)


_COMMANDS = {
    "run": cmd_run,
    "matrix": cmd_matrix,
    "tables": cmd_tables,
    "figures": cmd_figures,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(logging.INFO if args.verbose else level_from_env())
    try:
        return _COMMANDS[args.command](args)
    except ConfigIOError as e:
        console.print(f"[bold red]Error:[/] {e}")
        return EXIT_IO
    except ConfigError as e:
        console.print(f"[bold red]Configuration error:[/] {e}")
        return EXIT_CONFIG
    except OSError as e:
        console.print(f"[bold red]I/O error:[/] {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
