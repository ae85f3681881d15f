"""Command-line entry point: ``rotapack {generate,solve,batch,verify,render}``.

Exit codes: 0 success, 1 validation or verification failure, 2 parse or
usage error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .errors import ParseError, SolverError, ValidationError
from .fileio import (
    config_from_dict,
    parse_family,
    parse_instance,
    parse_solution,
    write_instance,
    write_solution,
)
from .harness import (
    REFERENCE_FAMILIES,
    SUMMARY_COLUMNS,
    InstanceFamily,
    generate_instance,
    reference_family,
    run_batch,
    summarize,
)
from .layout import verify_solution
from .permutations import PermutationScheme
from .solver import PAIR_POLICIES, SolverConfig, solve

log = logging.getLogger("rotapack")

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _solver_config(args) -> SolverConfig:
    raw = {}
    if getattr(args, "config", None):
        try:
            raw = json.loads(_read(args.config))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{args.config}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    for key in ("theta", "tolerance", "postopt_threshold", "pair_policy", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    if getattr(args, "no_postopt", False):
        raw["postoptimize"] = False
    return config_from_dict(raw)


def format_table(rows: list[dict], delimiter: str = ",") -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, delimiter=delimiter, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def cmd_generate(args) -> int:
    if args.reference:
        family = reference_family(args.reference)
    elif args.family:
        family = parse_family(_read(args.family))
    else:
        if args.size is None or args.radius_range is None or args.mass_range is None:
            raise ParseError("generate needs --reference, --family, or --size with --radius-range and --mass-range")
        family = InstanceFamily(
            args.size, tuple(args.radius_range), tuple(args.mass_range), seed=args.seed_family, name=args.name or ""
        )
    instance = generate_instance(family)
    meta = {
        "generator": "uniform",
        "size": family.size,
        "radius_range": list(family.radius_range),
        "mass_range": list(family.mass_range),
        "seed": family.seed,
    }
    _emit(write_instance(instance, meta), args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = parse_instance(_read(args.instance))
    config = _solver_config(args)
    perm = None
    if args.permutation:
        try:
            perm = [int(tok) for tok in args.permutation.split(",")]
        except ValueError:
            raise ParseError(f"--permutation: expected comma-separated ids, got {args.permutation!r}") from None
    sol = solve(instance, perm, config)
    _emit(write_solution(sol, instance.name, config, include_timing=not args.no_timing), args.output)
    if args.svg:
        from .plotting import render_layout, save_figure

        save_figure(render_layout(sol, instance, show_border=args.border), args.svg)
    log.info("radius %.6f  f2 %.3e", sol.radius, sol.f2)
    return EXIT_OK


def cmd_batch(args) -> int:
    config = _solver_config(args)
    reports = []
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for path in args.instances:
        instance = parse_instance(_read(path))
        scheme = PermutationScheme.for_circles(instance.circles, args.b, args.seed if args.seed is not None else 0)
        runs = args.runs
        if not args.replace and runs > scheme.space_size():
            log.warning("%s: only %d distinct orders exist; running all of them", path, scheme.space_size())
            runs = scheme.space_size()
        report = run_batch(instance, scheme, runs, args.parallelism, config, replace=args.replace)
        reports.append(report)
        log.info("%s: best radius %.6f (run %d of %d, %d failed)", path, report.best.f1, report.best_index, runs, report.failures)
        stem = instance.name or Path(path).stem
        if out_dir:
            (out_dir / f"{stem}.solution.json").write_text(write_solution(report.best, instance.name, config, scheme.b))
            from .plotting import plot_run_distribution, render_layout, save_figure

            save_figure(render_layout(report.best, instance, show_border=True), out_dir / f"{stem}.{args.figure_format}")
            save_figure(plot_run_distribution(report), out_dir / f"{stem}.runs.{args.figure_format}")
        elif args.output and len(args.instances) == 1:
            _emit(write_solution(report.best, instance.name, config, scheme.b), args.output)
    table = format_table(summarize(reports), "\t" if args.tsv else ",")
    if out_dir:
        (out_dir / ("summary.tsv" if args.tsv else "summary.csv")).write_text(table)
    sys.stdout.write(table)
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = parse_instance(_read(args.instance))
    sol, _ = parse_solution(_read(args.solution))
    report = verify_solution(instance, sol, args.tol)
    for a, b, depth in report.overlaps:
        print(f"overlap: circles {a} and {b} by {depth:.6g}")
    for a, excess in report.containment:
        print(f"containment: circle {a} exceeds the container by {excess:.6g}")
    print(f"f1 {report.f1!r}  f2 {report.f2!r}  reported radius {sol.radius!r}")
    if report.feasible:
        print("feasible")
        return EXIT_OK
    print(f"infeasible: {len(report.overlaps)} overlaps, {len(report.containment)} containment violations")
    return EXIT_INVALID


def cmd_render(args) -> int:
    from .plotting import render_layout, save_figure

    instance = parse_instance(_read(args.instance))
    sol, _ = parse_solution(_read(args.solution))
    save_figure(render_layout(sol, instance, show_border=args.border), args.output)
    return EXIT_OK


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", type=float, help="angle of the second seed circle (radians, default 0)")
    p.add_argument("--tolerance", type=float, help="geometric tolerance (default 1e-9)")
    p.add_argument("--postopt-threshold", type=float, help="relative radius gain a postopt move must exceed")
    p.add_argument("--pair-policy", choices=PAIR_POLICIES)
    p.add_argument("--seed", type=int, help="seed for order sampling and the seeded-random pair policy")
    p.add_argument("--no-postopt", action="store_true", help="skip postoptimization")
    p.add_argument("--config", help="JSON file with solver settings (flags override it)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotapack", description="Balanced packing of unequal circles in a circular container.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a seeded random instance")
    g.add_argument("--reference", choices=[f.name for f in REFERENCE_FAMILIES])
    g.add_argument("--family", help="family file (rotapack/family JSON)")
    g.add_argument("--size", type=int)
    g.add_argument("--radius-range", type=float, nargs=2, metavar=("MIN", "MAX"))
    g.add_argument("--mass-range", type=float, nargs=2, metavar=("MIN", "MAX"))
    g.add_argument("--seed", dest="seed_family", type=int, default=0)
    g.add_argument("--name")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", parents=[common], help="solve one placement order (descending radius by default)")
    s.add_argument("instance")
    s.add_argument("--permutation", help="comma-separated placement order")
    s.add_argument("-o", "--output")
    s.add_argument("--svg", help="also render the layout to this file")
    s.add_argument("--border", action="store_true", help="draw the border polygon in the figure")
    s.add_argument("--no-timing", action="store_true", help="omit timing from the solution file")
    _add_solver_flags(s)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("batch", parents=[common], help="solve many block-shuffled orders and keep the best")
    b.add_argument("instances", nargs="+")
    b.add_argument("--runs", type=int, default=5040)
    b.add_argument("-b", type=int, help="block parameter (default 5 for n >= 10, else 1)")
    b.add_argument("-j", "--parallelism", type=int, default=1)
    b.add_argument("--replace", action="store_true", help="allow repeated orders beyond the space size")
    b.add_argument("--out-dir", help="write best solutions, figures and the summary table here")
    b.add_argument("--figure-format", default="svg", choices=("svg", "png", "pdf"))
    b.add_argument("--tsv", action="store_true", help="tab-delimited summary")
    b.add_argument("-o", "--output", help="best solution file (single instance, without --out-dir)")
    _add_solver_flags(b)
    b.set_defaults(func=cmd_batch)

    v = sub.add_parser("verify", parents=[common], help="recheck a solution file against its instance")
    v.add_argument("solution")
    v.add_argument("instance")
    v.add_argument("--tol", type=float, default=1e-6)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", parents=[common], help="draw a solution file")
    r.add_argument("solution")
    r.add_argument("instance")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--border", action="store_true")
    r.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
