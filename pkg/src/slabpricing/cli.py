"""Command line interface: scenario-driven analyses emitted as CSV.

Subcommands:

    demand       demand-curve families over a price grid
    respond      price-response properties table (slope, hazard, elasticity, wtp)
    revenue      expected-revenue report for one slab plan
    optimize     exhaustive slab-structure search
    equilibrium  supply fits and demand-supply equilibria
    simulate     Monte Carlo check of the revenue report
    reproduce    full battery over the bundled scenarios

Global flags: --scenario <path>, --out <dir>, --seed <u64>, --overwrite.
Numbers are written with 10 significant digits; reruns with identical inputs
produce byte-identical files. Exit codes: 0 success, 2 usage, 3 schema,
4 infeasible, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .demand import Consumer, demand_convex_pair
from .equilibrium import EquilibriumPoint, FitMethod, SupplyLine, fit_supply_line, solve_equilibrium
from .errors import PricingError
from .price_response import (
    WTP_REFERENCE_PRICES,
    ResponseContext,
    hazard_rate,
    point_elasticity,
    price_response,
    response_slope,
    willingness_to_pay,
)
from .revenue import (
    RevenueReport,
    best_by_slab_count,
    compare_domains,
    discount_ladder_plans,
    expected_revenue,
    optimize_slab_structure,
    plan_for_consumer,
)
from .scenario import (
    BUNDLED_SCENARIOS,
    EquilibriumRequest,
    Scenario,
    bundled_scenario_path,
    parse_scenario,
)
from .simulate import MCEstimate, SimConfig, estimate_expected_revenue_mc


class UsageError(Exception):
    """Command/flag/scenario mismatch; maps to exit code 2."""


def format_number(value: float) -> str:
    """10-significant-digit text form; -0 is normalized to 0."""
    if value == 0:
        value = 0.0
    return f"{value:.10g}"


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]], overwrite: bool) -> Path:
    if path.exists() and not overwrite:
        raise UsageError(f"{path} exists; pass --overwrite to replace it")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    print(f"wrote {path}")
    return path


# ---------------------------------------------------------------------------
# shared scenario plumbing


def _load_scenario(args: argparse.Namespace) -> Scenario:
    if not args.scenario:
        raise UsageError("--scenario is required for this command")
    return parse_scenario(args.scenario)


def _own_minimums(consumer: Consumer, commodity: int) -> tuple[float, float]:
    if commodity == 1:
        return consumer.min_qty1, consumer.min_qty2
    return consumer.min_qty2, consumer.min_qty1


def _context_for(
    scenario: Scenario,
    consumer: Consumer,
    commodity: int,
    own_min: float | None = None,
    cross_min: float | None = None,
) -> ResponseContext:
    cross_offer = scenario.offer2 if commodity == 1 else scenario.offer1
    motive = consumer.motive1(0) if commodity == 1 else consumer.motive2(0)
    base_own, base_cross = _own_minimums(consumer, commodity)
    return ResponseContext(
        motive=motive,
        budget=consumer.budget,
        cross_price=cross_offer.slabs[0].unit_price,
        own_min_qty=base_own if own_min is None else own_min,
        cross_min_qty=base_cross if cross_min is None else cross_min,
    )


def _consumer_plan(scenario: Scenario, consumer_index: int, commodity: int):
    consumer = scenario.consumers[consumer_index]
    own = scenario.offer1 if commodity == 1 else scenario.offer2
    other = scenario.offer2 if commodity == 1 else scenario.offer1
    return plan_for_consumer(consumer, own, other, commodity)


def _price_grid(start: float, stop: float, points: int, spacing: str) -> list[float]:
    if spacing == "log":
        return [float(p) for p in np.logspace(math.log10(start), math.log10(stop), points)]
    return [float(p) for p in np.linspace(start, stop, points)]


# ---------------------------------------------------------------------------
# emission blocks (shared between single commands and reproduce)


def emit_curves_csv(scenario: Scenario, out: Path, overwrite: bool) -> list[Path]:
    """Demand-curve families, one file per commodity.

    Columns: price, one constrained column per consumer (their own
    minimums), then one unconstrained column per consumer (both minimums
    replaced by the request's baseline). Prices sweep the own price with the
    other commodity held at its first-slab price.
    """
    request = scenario.curves
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.curves request")
    grid = request.grid()
    if not grid:
        raise UsageError("empty price grid")
    p1_base = scenario.offer1.slabs[0].unit_price
    p2_base = scenario.offer2.slabs[0].unit_price
    baseline = request.baseline_min_qty
    written = []
    for commodity in (1, 2):
        tag = "mu" if commodity == 1 else "phi"
        header = ["price"]
        variants: list[tuple[Consumer, str]] = []
        for consumer in scenario.consumers:
            motive = consumer.motive1(0) if commodity == 1 else consumer.motive2(0)
            header.append(f"{tag}_{format_number(motive)}_constrained")
            variants.append((consumer, "constrained"))
        for consumer in scenario.consumers:
            motive = consumer.motive1(0) if commodity == 1 else consumer.motive2(0)
            header.append(f"{tag}_{format_number(motive)}_unconstrained")
            variants.append(
                (
                    dataclasses.replace(consumer, min_qty1=baseline, min_qty2=baseline),
                    "unconstrained",
                )
            )
        rows = []
        for price in grid:
            row: list[Any] = [price]
            for consumer, _ in variants:
                if commodity == 1:
                    row.append(demand_convex_pair(consumer, price, p2_base).x1)
                else:
                    row.append(demand_convex_pair(consumer, p1_base, price).x2)
            rows.append(row)
        written.append(
            write_csv(out / f"demand_x{commodity}.csv", header, rows, overwrite)
        )
    return written


def emit_response_csv(scenario: Scenario, out: Path, overwrite: bool) -> Path:
    """Response properties table on the requested price grid."""
    request = scenario.response
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.response request")
    consumer = scenario.consumers[request.consumer]
    ctx = _context_for(scenario, consumer, request.commodity)
    grid = _price_grid(request.price_start, request.price_stop, request.points, request.spacing)
    header = ["price", "response", "slope", "hazard", "elasticity"] + [
        f"wtp_ref_{format_number(ref)}" for ref in WTP_REFERENCE_PRICES
    ]
    rows = []
    for price in grid:
        point = price_response(ctx, price)
        rows.append(
            [
                price,
                point.qty,
                response_slope(ctx, price),
                hazard_rate(ctx, price),
                point_elasticity(ctx, price),
            ]
            + [willingness_to_pay(ctx, price, ref) for ref in WTP_REFERENCE_PRICES]
        )
    return write_csv(out / "response.csv", header, rows, overwrite)


_REVENUE_HEADER = [
    "scenario",
    "slab",
    "reach_prob",
    "acceptance_prob",
    "demand",
    "price",
    "contribution",
]


def _revenue_rows(name: str, report: RevenueReport) -> list[list[Any]]:
    rows: list[list[Any]] = [
        [
            name,
            line.index,
            line.reach_prob,
            line.acceptance_prob,
            line.demand,
            line.price,
            line.contribution,
        ]
        for line in report.per_slab
    ]
    rows.append([name, "total", "", "", "", "", report.total])
    return rows


def emit_revenue_csv(scenario: Scenario, out: Path, overwrite: bool) -> Path:
    request = scenario.revenue
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.revenue request")
    plan = _consumer_plan(scenario, request.consumer, request.commodity)
    report = expected_revenue(plan)
    return write_csv(
        out / "revenue.csv", _REVENUE_HEADER, _revenue_rows(scenario.name, report), overwrite
    )


def emit_slab_study_csv(scenario: Scenario, out: Path, overwrite: bool) -> Path:
    """Best plan per slab count for the scenario's ladder family."""
    request = scenario.optimizer
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.optimizer request")
    consumer = scenario.consumers[request.consumer]
    ctx = _context_for(scenario, consumer, request.commodity)
    counts = range(1, request.max_slabs + 1)

    def ladder():
        return discount_ladder_plans(
            ctx,
            request.base_prices,
            counts,
            discount=request.discount,
            acceptance=request.acceptance,
            attention_span=request.attention_span,
        )

    best_plan, best_report = optimize_slab_structure(ladder())
    by_count = best_by_slab_count(ladder())
    header = ["slab_count", "first_slab_price", "expected_revenue", "overall_best"]
    rows = []
    for count in counts:
        plan, report = by_count[count]
        rows.append(
            [
                count,
                plan.slabs[0].price,
                report.total,
                int(plan == best_plan),
            ]
        )
    return write_csv(out / "slab_study.csv", header, rows, overwrite)


def _equilibrium_demand(
    scenario: Scenario,
    request: EquilibriumRequest,
    commodity: int,
    constrained: bool,
):
    consumer = scenario.consumers[request.consumer]
    if constrained:
        ctx = _context_for(scenario, consumer, commodity)
    else:
        ctx = _context_for(
            scenario,
            consumer,
            commodity,
            own_min=request.baseline_min_qty,
            cross_min=request.baseline_min_qty,
        )
    return lambda price: price_response(ctx, price).qty


def _solve_equilibria(
    scenario: Scenario,
) -> list[tuple[int, str, SupplyLine, EquilibriumPoint]]:
    request = scenario.equilibrium
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.equilibrium request")
    results = []
    for commodity, pairs in ((1, request.supply1), (2, request.supply2)):
        supply = fit_supply_line(pairs, request.method)
        for variant, constrained in (("constrained", True), ("unconstrained", False)):
            demand_fn = _equilibrium_demand(scenario, request, commodity, constrained)
            point = solve_equilibrium(demand_fn, supply, request.bracket)
            results.append((commodity, variant, supply, point))
    return results


def emit_equilibrium_csv(scenario: Scenario, out: Path, overwrite: bool) -> Path:
    header = [
        "commodity",
        "variant",
        "fit_method",
        "slope",
        "intercept",
        "q_star",
        "p_star",
        "iterations",
        "residual",
    ]
    rows = [
        [
            commodity,
            variant,
            supply.fit_method.value,
            supply.slope,
            supply.intercept,
            point.qty,
            point.price,
            point.iterations,
            point.residual,
        ]
        for commodity, variant, supply, point in _solve_equilibria(scenario)
    ]
    return write_csv(out / "equilibrium.csv", header, rows, overwrite)


def emit_supply_fit_csv(scenario: Scenario, out: Path, overwrite: bool) -> Path:
    request = scenario.equilibrium
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.equilibrium request")
    header = ["commodity", "fit_method", "slope", "intercept"]
    rows = []
    for commodity, pairs in ((1, request.supply1), (2, request.supply2)):
        for method in (FitMethod.TWO_POINT, FitMethod.LEAST_SQUARES):
            line = fit_supply_line(pairs, method)
            rows.append([commodity, method.value, line.slope, line.intercept])
    return write_csv(out / "supply_fit.csv", header, rows, overwrite)


def _resolve_sim(scenario: Scenario, seed_flag: int | None) -> tuple[int, int]:
    request = scenario.simulation
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.simulation request")
    seed = request.seed if seed_flag is None else seed_flag
    return request.trials, seed


def _mc_row(name: str, report: RevenueReport, estimate: MCEstimate, trials: int, seed: int) -> list[Any]:
    gap = estimate.mean - report.total
    within = int(abs(gap) <= 3.0 * estimate.standard_error)
    return [
        name,
        trials,
        seed,
        report.total,
        estimate.mean,
        estimate.standard_error,
        gap,
        within,
    ]


_MC_HEADER = [
    "scenario",
    "trials",
    "seed",
    "closed_form",
    "mc_mean",
    "mc_stderr",
    "gap",
    "within_3se",
]


def emit_simulation_csv(scenario: Scenario, out: Path, overwrite: bool, seed_flag: int | None) -> list[Path]:
    request = scenario.revenue
    if request is None:
        raise UsageError(f"scenario {scenario.name!r} has no analysis.revenue request")
    trials, seed = _resolve_sim(scenario, seed_flag)
    plan = _consumer_plan(scenario, request.consumer, request.commodity)
    report = expected_revenue(plan)
    estimate = estimate_expected_revenue_mc(SimConfig(trials=trials, seed=seed, plan=plan))
    written = [
        write_csv(
            out / "mc.csv",
            _MC_HEADER,
            [_mc_row(scenario.name, report, estimate, trials, seed)],
            overwrite,
        )
    ]
    slab_header = ["slab", "purchases", "frequency", "purchase_probability"]
    slab_rows = []
    for k, count in enumerate(estimate.slab_counts, start=1):
        chain = 0.0
        if k <= plan.reachable_slabs:
            reach = 1.0
            for lam in plan.acceptance_probs[: k - 1]:
                reach *= 1.0 - lam
            chain = reach * plan.acceptance_probs[k - 1]
        slab_rows.append([k, count, count / estimate.trials, chain])
    written.append(write_csv(out / "mc_slabs.csv", slab_header, slab_rows, overwrite))
    return written


def emit_reproduce_battery(out: Path, overwrite: bool, seed_flag: int | None) -> list[Path]:
    """The full bundled-scenario battery; the acceptance artifacts."""
    scenarios = {name: parse_scenario(bundled_scenario_path(name)) for name in BUNDLED_SCENARIOS}
    written: list[Path] = []

    convex = scenarios["paper_convex"]
    written.append(emit_supply_fit_csv(convex, out, overwrite))
    written.extend(emit_curves_csv(convex, out, overwrite))
    written.append(emit_response_csv(convex, out, overwrite))
    written.append(emit_equilibrium_csv(convex, out, overwrite))
    written.append(emit_slab_study_csv(scenarios["slab_study"], out, overwrite))

    revenue_rows: list[list[Any]] = []
    mc_rows: list[list[Any]] = []
    for name in BUNDLED_SCENARIOS:
        scenario = scenarios[name]
        request = scenario.revenue
        if request is None:
            continue
        plan = _consumer_plan(scenario, request.consumer, request.commodity)
        report = expected_revenue(plan)
        revenue_rows.extend(_revenue_rows(name, report))
        trials, seed = _resolve_sim(scenario, seed_flag)
        estimate = estimate_expected_revenue_mc(SimConfig(trials=trials, seed=seed, plan=plan))
        mc_rows.append(_mc_row(name, report, estimate, trials, seed))
    written.append(write_csv(out / "revenue_reports.csv", _REVENUE_HEADER, revenue_rows, overwrite))
    written.append(write_csv(out / "mc_validation.csv", _MC_HEADER, mc_rows, overwrite))

    ranking_sources = ("paper_convex", "paper_mixed", "paper_nonconvex")
    domains = []
    plans = []
    for name in ranking_sources:
        scenario = scenarios[name]
        request = scenario.revenue
        domains.append(scenario.domain)
        plans.append(_consumer_plan(scenario, request.consumer, request.commodity))
    comparison = compare_domains(
        domains,
        market=list(convex.consumers),
        plans=plans,
        labels=list(ranking_sources),
    )
    rank_header = ["rank", "scenario", "domain_kind", "expected_revenue"]
    rank_rows = [
        [rank, entry.label, entry.domain.kind.value, entry.report.total]
        for rank, entry in enumerate(comparison.ranked, start=1)
    ]
    written.append(write_csv(out / "domain_ranking.csv", rank_header, rank_rows, overwrite))
    return written


# ---------------------------------------------------------------------------
# dispatch


def _cmd_demand(args: argparse.Namespace) -> None:
    emit_curves_csv(_load_scenario(args), Path(args.out), args.overwrite)


def _cmd_respond(args: argparse.Namespace) -> None:
    emit_response_csv(_load_scenario(args), Path(args.out), args.overwrite)


def _cmd_revenue(args: argparse.Namespace) -> None:
    emit_revenue_csv(_load_scenario(args), Path(args.out), args.overwrite)


def _cmd_optimize(args: argparse.Namespace) -> None:
    emit_slab_study_csv(_load_scenario(args), Path(args.out), args.overwrite)


def _cmd_equilibrium(args: argparse.Namespace) -> None:
    scenario = _load_scenario(args)
    out = Path(args.out)
    emit_supply_fit_csv(scenario, out, args.overwrite)
    emit_equilibrium_csv(scenario, out, args.overwrite)


def _cmd_simulate(args: argparse.Namespace) -> None:
    emit_simulation_csv(_load_scenario(args), Path(args.out), args.overwrite, args.seed)


def _cmd_reproduce(args: argparse.Namespace) -> None:
    emit_reproduce_battery(Path(args.out), args.overwrite, args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slabprice",
        description="Slab-pricing analyses driven by scenario files; output is CSV.",
    )
    parser.add_argument("--scenario", help="path to a .scn scenario file")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=None, help="override the scenario's simulation seed")
    parser.add_argument("--overwrite", action="store_true", help="replace existing output files")
    commands = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "demand": (_cmd_demand, "emit demand-curve families"),
        "respond": (_cmd_respond, "emit the price-response properties table"),
        "revenue": (_cmd_revenue, "emit the expected-revenue report"),
        "optimize": (_cmd_optimize, "emit the slab-count study"),
        "equilibrium": (_cmd_equilibrium, "emit supply fits and equilibria"),
        "simulate": (_cmd_simulate, "emit the Monte Carlo check"),
        "reproduce": (_cmd_reproduce, "emit the full bundled-scenario battery"),
    }
    for name, (handler, help_text) in handlers.items():
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print(f"error[usage]: --seed must fit in 64 bits: {args.seed}", file=sys.stderr)
        return 2
    try:
        args.handler(args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 2
    except PricingError as exc:
        print(f"error[{exc.category}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except FileNotFoundError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
