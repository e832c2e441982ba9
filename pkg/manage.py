#!/usr/bin/env python3
"""
Command-line entry point for carpet-lab.

Usage:
    python manage.py generate F2 --level 1
    python manage.py conductance F2 --cell 1,1 --m 1 --p 1.2
    python manage.py scan --d 2 --p 1.1,1.2,1.3 --m-max 3
    python manage.py render F2 --level 3

Exit codes: 0 success, 2 usage error, 3 budget exceeded, 4 solver
non-convergence, 1 any other failure.
"""

import argparse
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from graphs.builder import build_graph
from graphs.export import write_cells_csv, write_edge_list, write_laplacian_mtx
from helpers.manifest import build_manifest, write_manifest
from helpers.render import render_cells_svg, render_ratio_plot
from lab.conductance import check_slow, solve_cell
from lab.critical import critical_p_bracket
from lab.ratio import ratio_scan
from lab.reports import ratio_frame, reports_frame, write_frame, write_json
from lattice.builtins import BUILTIN_NAMES, builtin_spec, carpet_for_dimension
from lattice.serialization import parse_spec
from models.errors import BudgetExceededError, CarpetError
from models.fractals import CellIndex, FractalSpec
from models.graphs import AdjacencyMode
from models.solver import GeneralBackend, P2Backend, SolverConfig
from settings import OUTPUT_DIR, SOLVER_MAX_ITERATIONS, SOLVER_TOLERANCE, THREADS, logger
from solvers.export import write_diagnostics_json, write_solution_csv

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_NOT_CONVERGED = 4


def resolve_spec(text: str) -> FractalSpec:
    """A built-in name, or the `dimension=...; retained=...` text form."""
    if "retained=" in text:
        return parse_spec(text)
    return builtin_spec(text)


def parse_p_list(text: str) -> List[float]:
    values = [chunk.strip() for chunk in text.split(",") if chunk.strip()]
    if not values:
        raise argparse.ArgumentTypeError("the p list is empty")
    try:
        return [float(v) for v in values]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid p list '{text}'")


def solver_config(args) -> SolverConfig:
    return SolverConfig(
        rel_tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        p2_backend=P2Backend(args.p2_backend),
        general_backend=GeneralBackend(args.general_backend)
    )


def cmd_generate(args) -> int:
    """Write the cell list and edge list of one level; print the counts."""
    spec = resolve_spec(args.spec)
    mode = AdjacencyMode(args.mode)
    graph = build_graph(spec, args.level, mode)

    out_dir = Path(args.out_dir)
    stem = f"{spec.name}-level{args.level}"
    outputs = [
        write_cells_csv(graph.vertices, out_dir / f"{stem}-cells.csv"),
        write_edge_list(graph, out_dir / f"{stem}-{mode.value}.edges"),
    ]
    if args.laplacian:
        outputs.append(write_laplacian_mtx(graph, out_dir / f"{stem}-{mode.value}-laplacian.mtx"))

    print(f"{graph.num_vertices} cells, {graph.num_edges} edges")
    args.outputs = outputs
    return EXIT_OK


def cmd_conductance(args) -> int:
    """Conductance of one cell against the complement of its neighborhood, with bounds."""
    spec = resolve_spec(args.spec)
    cell = CellIndex.parse(args.cell, args.n)
    check_slow(spec.dimension, args.m, args.allow_slow)
    mode = AdjacencyMode(args.mode)
    config = solver_config(args)

    report, graph, result = solve_cell(spec, args.n, cell, args.m, args.p, mode, config)
    out_dir = Path(args.out_dir)
    stem = f"{spec.name}-n{args.n}-{cell.label.replace(',', '_')}-m{args.m}-p{args.p:g}"
    outputs = [write_json(report, out_dir / f"{stem}.json")]

    if args.solution:
        outputs.append(write_solution_csv(graph, result, out_dir / f"{stem}-solution.csv"))
        outputs.append(write_diagnostics_json(result, out_dir / f"{stem}-diagnostics.json", {
            "spec": spec.name, "cell": cell.label, "m": args.m, "p": args.p
        }))

    print(reports_frame([report]).to_string(index=False))
    args.outputs = outputs
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_scan(args) -> int:
    """Ratio scan over p and m = 1..m_max, with an optional critical-p bisection."""
    config = solver_config(args)
    out_dir = Path(args.out_dir)
    depths = range(1, args.m_max + 1)
    scans = [ratio_scan(args.d, p, depths, config, args.allow_slow, args.threads) for p in args.p]

    stem = f"scan-d{args.d}"
    reports = [report for scan in scans for row in scan.rows for report in (row.corner, row.center)]
    outputs = [
        write_frame(ratio_frame(scans), out_dir / f"{stem}-ratios.csv"),
        write_frame(reports_frame(reports), out_dir / f"{stem}-reports.csv"),
        render_ratio_plot(scans, out_dir / f"{stem}-ratios.svg"),
    ]
    for scan in scans:
        print(f"p = {scan.p:g}: ratios {', '.join(f'{row.ratio:.6g}' for row in scan.rows)}"
              f" ({'increasing' if scan.increasing else 'not increasing'})")

    if args.critical:
        bracket = critical_p_bracket(
            carpet_for_dimension(args.d), 1,
            m_max=args.m_max, p_lo=args.p_lo, p_hi=args.p_hi,
            config=config, threads=args.threads
        )
        outputs.append(write_json(bracket, out_dir / f"{stem}-critical.json"))
        print(f"critical p estimate in [{bracket.p_low:.4f}, {bracket.p_high:.4f}]"
              f"{'' if bracket.sign_change else ' (no sign change)'}")

    args.outputs = outputs
    converged = all(report.converged for report in reports)
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_render(args) -> int:
    """SVG of a planar fractal approximation."""
    spec = resolve_spec(args.spec)
    out = Path(args.out) if args.out else Path(args.out_dir) / f"{spec.name}-level{args.level}.svg"
    summary = render_cells_svg(spec, args.level, out)
    print(f"{summary.squares} squares -> {summary.path}")
    args.outputs = [Path(summary.path)]
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "conductance": cmd_conductance,
    "scan": cmd_scan,
    "render": cmd_render,
}


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, default=SOLVER_TOLERANCE, help="Relative solver tolerance")
    parser.add_argument("--max-iterations", type=int, default=SOLVER_MAX_ITERATIONS, help="Outer iteration cap")
    parser.add_argument("--p2-backend", choices=[b.value for b in P2Backend], default=P2Backend.DIRECT.value)
    parser.add_argument("--general-backend", choices=[b.value for b in GeneralBackend],
                        default=GeneralBackend.DAMPED_NEWTON.value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="manage.py", description="Fractal carpet p-conductance lab")
    parser.add_argument("--out-dir", default=OUTPUT_DIR, help="Directory for all outputs")
    parser.add_argument("--threads", type=int, default=THREADS, help="Workers for scan grids")
    parser.add_argument("--allow-slow", action="store_true", help="Permit the long d = 3 runs")
    modes = [mode.value for mode in AdjacencyMode]
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="Write cells and edges of one level")
    generate.add_argument("spec", help=f"Built-in name ({', '.join(BUILTIN_NAMES)}) or spec text")
    generate.add_argument("--level", type=int, required=True)
    generate.add_argument("--mode", choices=modes, default=AdjacencyMode.NONEMPTY_INTERSECTION.value)
    generate.add_argument("--laplacian", action="store_true", help="Also write the Laplacian in Matrix Market form")

    conductance = commands.add_parser("conductance", help="Conductance of a cell against Γ(Q)^c")
    conductance.add_argument("spec")
    conductance.add_argument("--cell", required=True, help="Comma separated coordinates, e.g. 1,1")
    conductance.add_argument("--n", type=int, default=1, help="Level of the cell")
    conductance.add_argument("--m", type=int, required=True, help="Refinement depth")
    conductance.add_argument("--p", type=float, required=True)
    conductance.add_argument("--mode", choices=modes, default=AdjacencyMode.NONEMPTY_INTERSECTION.value)
    conductance.add_argument("--solution", action="store_true", help="Also write the minimizer and diagnostics")
    _add_solver_flags(conductance)

    scan = commands.add_parser("scan", help="Corner/center ratio scan")
    scan.add_argument("--d", type=int, required=True, choices=[2, 3])
    scan.add_argument("--p", type=parse_p_list, required=True, help="Comma separated exponents")
    scan.add_argument("--m-max", type=int, required=True)
    scan.add_argument("--critical", action="store_true", help="Also bisect for the critical exponent")
    scan.add_argument("--p-lo", type=float, default=1.05)
    scan.add_argument("--p-hi", type=float, default=2.5)
    _add_solver_flags(scan)

    render = commands.add_parser("render", help="SVG picture of a planar fractal")
    render.add_argument("spec")
    render.add_argument("--level", type=int, required=True)
    render.add_argument("--out", help="SVG path (default: <out-dir>/<spec>-level<L>.svg)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or EXIT_OK)

    started_at = datetime.now(timezone.utc)
    args.outputs = []
    try:
        code = COMMANDS[args.command](args)
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {e.detail}")
        return EXIT_BUDGET
    except (CarpetError, ValueError) as e:
        detail = getattr(e, "detail", str(e))
        logger.error(f"Invalid request: {detail}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Command '{args.command}' failed: {e}")
        return EXIT_FAILURE

    parameters = {key: value for key, value in vars(args).items() if key != "outputs"}
    manifest = build_manifest(args.command, parameters, started_at, args.outputs)
    write_manifest(manifest, args.out_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
