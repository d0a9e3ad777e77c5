"""Command line front end producing text or JSON stratification reports."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .errors import (
    ConsistencyError,
    DataError,
    DegenerateAllocationError,
    EmptyPopulationError,
    InfeasibleProblemError,
    InputSchemaError,
    InvalidSpecError,
    UndefinedCVError,
)
from .moments import ProblemSpec, allocate_neyman
from .oracle import DEFAULT_ORACLE_CAP, brute_force_solve, count_solutions
from .population import build_frequency_table, load_population
from .solver import StratificationSolution, solve_problem

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Everything one invocation needs."""

    input_path: str
    strata: int
    sample_size: int
    x_col: str = "x"
    y_col: str | None = None
    fpc: bool = True
    oracle_check: bool = False
    oracle_cap: int = DEFAULT_ORACLE_CAP
    output_format: str = "text"
    delimiter: str = ","
    neyman: bool = False


def run(cfg: RunConfig) -> int:
    """Load, solve, optionally cross-check, and print one report to stdout.

    Nothing reaches stdout unless the run succeeds. Diagnostics go to
    stderr, one line each. Returns the process exit code: 0 on success, 2 on
    input or schema problems, 3 on infeasible problems, 4 on internal
    consistency failures.
    """
    try:
        with open(cfg.input_path, newline="", encoding="utf-8") as handle:
            population = load_population(
                handle, cfg.x_col, cfg.y_col, delimiter=cfg.delimiter
            )
        ft = build_frequency_table(population)
        spec = ProblemSpec(
            L=cfg.strata, n=cfg.sample_size, N=ft.N, fpc=cfg.fpc
        )
        solution = solve_problem(ft, spec)

        oracle_checked = False
        if cfg.oracle_check:
            m = count_solutions(ft.K, spec.L)
            if m > cfg.oracle_cap:
                print(
                    f"warning: exhaustive check skipped, {m} candidates "
                    f"exceed the cap of {cfg.oracle_cap}",
                    file=sys.stderr,
                )
            else:
                reference = brute_force_solve(ft, spec, cfg.oracle_cap)
                if solution.boundaries != reference.boundaries or not math.isclose(
                    solution.variance, reference.variance, rel_tol=1e-9
                ):
                    raise ConsistencyError(
                        "solver disagrees with the exhaustive check: "
                        f"boundaries {solution.boundaries} vs "
                        f"{reference.boundaries}, variance "
                        f"{solution.variance} vs {reference.variance}"
                    )
                oracle_checked = True

        neyman = _neyman_or_none(solution, spec.n) if cfg.neyman else None
        for index, report in enumerate(solution.strata, start=1):
            if report.sample_size == 0:
                print(
                    f"warning: stratum {index} rounds to a sample size of 0",
                    file=sys.stderr,
                )
        if cfg.output_format == "json":
            print(emit_json(solution, cfg, oracle_checked, neyman))
        else:
            print(emit_text(solution, cfg, oracle_checked, neyman))
        return EXIT_OK
    except OSError as exc:
        return _fail(f"cannot read input: {exc}", EXIT_INPUT)
    except (InputSchemaError, DataError, EmptyPopulationError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    except (InvalidSpecError, InfeasibleProblemError, UndefinedCVError) as exc:
        return _fail(str(exc), EXIT_INFEASIBLE)
    except ConsistencyError as exc:
        return _fail(str(exc), EXIT_INTERNAL)


def emit_json(
    solution: StratificationSolution,
    cfg: RunConfig,
    oracle_checked: bool = False,
    neyman: tuple[float, ...] | None = None,
) -> str:
    """Machine-readable report with stable field names and full precision."""
    payload: dict[str, object] = {
        "N": solution.N,
        "K": solution.K,
        "L": len(solution.strata),
        "n": cfg.sample_size,
        "fpc": cfg.fpc,
        "boundaries": list(solution.boundaries),
        "strata": [
            {
                "N_h": report.size,
                "S2_h": report.variance,
                "n_h_frac": report.sample_fraction,
                "n_h": report.sample_size,
            }
            for report in solution.strata
        ],
        "variance": solution.variance,
        "cv": solution.cv,
        "unit_cost": solution.total_unit_cost,
        "elapsed_s": solution.elapsed,
        "oracle_checked": oracle_checked,
    }
    if cfg.neyman:
        payload["neyman"] = None if neyman is None else list(neyman)
    return json.dumps(payload, indent=2)


def emit_text(
    solution: StratificationSolution,
    cfg: RunConfig,
    oracle_checked: bool = False,
    neyman: tuple[float, ...] | None = None,
) -> str:
    """Human-readable report, CV to two decimals."""
    lines = [
        f"N           {solution.N}",
        f"|I|         {solution.K}",
        f"L           {len(solution.strata)}",
        f"n           {cfg.sample_size}",
        f"fpc         {'on' if cfg.fpc else 'off'}",
        f"CPU (s)     {solution.elapsed:.3f}",
        f"unit cost   {solution.total_unit_cost:.6g}",
        f"variance    {solution.variance:.6g}",
        f"CV (%)      {solution.cv:.2f}",
        "boundaries  " + (" ".join(f"{b:g}" for b in solution.boundaries) or "-"),
    ]
    if cfg.oracle_check:
        lines.append(f"oracle      {'agreed' if oracle_checked else 'skipped'}")

    table = [
        ["stratum"] + [str(h) for h in range(1, len(solution.strata) + 1)],
        ["Nh"] + [str(r.size) for r in solution.strata],
        ["nh"] + [str(r.sample_size) for r in solution.strata],
        ["nh exact"] + [f"{r.sample_fraction:.3f}" for r in solution.strata],
        ["S2h"] + [f"{r.variance:.4g}" for r in solution.strata],
    ]
    if cfg.neyman:
        if neyman is None:
            table.append(["nh neyman"] + ["-"] * len(solution.strata))
        else:
            table.append(["nh neyman"] + [f"{v:.3f}" for v in neyman])
    widths = [
        max(len(row[col]) for row in table) for col in range(len(table[0]))
    ]
    lines.append("")
    for row in table:
        label = row[0].ljust(widths[0])
        cells = "  ".join(
            cell.rjust(widths[col]) for col, cell in enumerate(row[1:], start=1)
        )
        lines.append(f"{label}  {cells}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stratopt",
        description=(
            "Exact stratum boundaries over a sorted size variable, "
            "minimizing the variance of the estimated total under "
            "proportional allocation."
        ),
    )
    parser.add_argument("--input", required=True, help="delimited text file with a header row")
    parser.add_argument("--x-col", default="x", help="size variable column (default: x)")
    parser.add_argument("--y-col", default=None, help="study variable column (default: reuse --x-col)")
    parser.add_argument("--strata", type=int, required=True, metavar="L", help="number of strata")
    parser.add_argument("--sample-size", type=int, required=True, metavar="n", help="total sample size")
    parser.add_argument("--no-fpc", action="store_true", help="drop the without-replacement correction")
    parser.add_argument("--check-oracle", action="store_true", help="cross-check against exhaustive enumeration")
    parser.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP, metavar="M", help=f"largest enumeration allowed (default: {DEFAULT_ORACLE_CAP})")
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")
    parser.add_argument("--tab", action="store_true", help="input is tab separated")
    parser.add_argument("--neyman", action="store_true", help="also report dispersion-weighted allocations")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input_path=args.input,
        strata=args.strata,
        sample_size=args.sample_size,
        x_col=args.x_col,
        y_col=args.y_col,
        fpc=not args.no_fpc,
        oracle_check=args.check_oracle,
        oracle_cap=args.oracle_cap,
        output_format="json" if args.json else "text",
        delimiter="\t" if args.tab else ",",
        neyman=args.neyman,
    )
    return run(cfg)


def _neyman_or_none(
    solution: StratificationSolution, n: int
) -> tuple[float, ...] | None:
    try:
        return allocate_neyman(
            [r.size for r in solution.strata],
            [math.sqrt(r.variance) for r in solution.strata],
            n,
        )
    except DegenerateAllocationError as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return None


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
