"""Expected revenue over a slab ladder and slab-structure search.

A consumer walks the slabs in order. Reaching slab k requires rejecting
slabs 1..k-1; slab k is then accepted with its acceptance probability. The
walk stops at the first acceptance or when the attention span runs out.
Expected revenue weights each slab's revenue (demand times price) by the
probability the walk buys there:

    total = sum over k = 1..min(span, slabs) of
            reach(k) * accept(k) * demand(k) * price(k)

where reach(k) is the product of the rejection probabilities before k.

The optimizer is an exhaustive search over finite candidate plans; results
are independent of evaluation order via a deterministic tie-break (fewer
slabs, then lower first-slab price).
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass

from .demand import Consumer, DomainSpec, Offer
from .errors import InvalidParameterError
from .price_response import ResponseContext, ResponsePoint, price_response

# A per-slab demand evaluator: (0-based slab index, unit price) -> quantity.
# May return a bare quantity or a ResponsePoint.
DemandFn = Callable[[int, float], "float | ResponsePoint"]


@dataclass(frozen=True)
class PlanSlab:
    """One rung of a plan: its unit price and the demand context behind it."""

    price: float
    context: ResponseContext

    def __post_init__(self) -> None:
        if not self.price > 0:
            raise InvalidParameterError(f"slab price must be positive: {self.price}")


@dataclass(frozen=True)
class SlabPlan:
    """A slab ladder offered to a consumer population.

    acceptance_probs pairs with slabs index by index; attention_span bounds
    how many rungs a walk may visit.
    """

    slabs: tuple[PlanSlab, ...]
    acceptance_probs: tuple[float, ...]
    attention_span: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "slabs", tuple(self.slabs))
        object.__setattr__(self, "acceptance_probs", tuple(self.acceptance_probs))
        if not self.slabs:
            raise InvalidParameterError("plan needs at least one slab")
        if len(self.acceptance_probs) != len(self.slabs):
            raise InvalidParameterError(
                "need exactly one acceptance probability per slab: "
                f"{len(self.acceptance_probs)} for {len(self.slabs)} slabs"
            )
        for lam in self.acceptance_probs:
            if not 0.0 <= lam <= 1.0:
                raise InvalidParameterError(
                    f"acceptance probability {lam} outside [0, 1]"
                )
        if self.attention_span < 1:
            raise InvalidParameterError(
                f"attention_span must be at least 1: {self.attention_span}"
            )

    @property
    def n_slabs(self) -> int:
        return len(self.slabs)

    @property
    def reachable_slabs(self) -> int:
        return min(self.attention_span, len(self.slabs))


@dataclass(frozen=True)
class SlabContribution:
    """One slab's line in a revenue report. index is 1-based.

    reach_prob is attention-aware: 0 for rungs past the attention span.
    """

    index: int
    reach_prob: float
    acceptance_prob: float
    demand: float
    price: float
    contribution: float


@dataclass(frozen=True)
class RevenueReport:
    per_slab: tuple[SlabContribution, ...]
    total: float
    plan: SlabPlan
    diagnostic: str = ""


def purchase_probability(acceptance_probs: Sequence[float], k: int) -> float:
    """Probability that the walk buys at slab k (1-based).

    The first k-1 slabs must be rejected, then slab k accepted:
    prod_{j<k} (1 - lam_j) * lam_k.
    """
    if not 1 <= k <= len(acceptance_probs):
        raise InvalidParameterError(
            f"slab index {k} out of range 1..{len(acceptance_probs)}"
        )
    reach = 1.0
    for lam in acceptance_probs[: k - 1]:
        reach *= 1.0 - lam
    return reach * acceptance_probs[k - 1]


def slab_demand_fn(plan: SlabPlan) -> DemandFn:
    """Default per-slab evaluator: the response of each slab's own context."""

    def evaluate(k: int, price: float) -> ResponsePoint:
        return price_response(plan.slabs[k].context, price)

    return evaluate


def as_response_point(value: float | ResponsePoint) -> ResponsePoint:
    """Normalize a demand evaluator's output to a clamped ResponsePoint."""
    if isinstance(value, ResponsePoint):
        return value
    raw = float(value)
    return ResponsePoint(qty=max(0.0, raw), infeasible=raw < 0, raw=raw)


def expected_revenue(plan: SlabPlan, demand_fn: DemandFn | None = None) -> RevenueReport:
    """Expected revenue of a plan, with a per-slab breakdown.

    Every slab gets a report line; rungs beyond the attention span carry
    reach probability 0. When demand is infeasible (or zero) at every slab
    the report totals 0 and says so in the diagnostic.
    """
    evaluate = slab_demand_fn(plan) if demand_fn is None else demand_fn
    lines = []
    total = 0.0
    reach = 1.0
    any_positive = False
    for k, slab in enumerate(plan.slabs, start=1):
        reachable = k <= plan.reachable_slabs
        point = as_response_point(evaluate(k - 1, slab.price))
        if point.qty > 0.0:
            any_positive = True
        lam = plan.acceptance_probs[k - 1]
        reach_k = reach if reachable else 0.0
        contribution = reach_k * lam * point.qty * slab.price
        lines.append(
            SlabContribution(
                index=k,
                reach_prob=reach_k,
                acceptance_prob=lam,
                demand=point.qty,
                price=slab.price,
                contribution=contribution,
            )
        )
        total += contribution
        if reachable:
            reach *= 1.0 - lam
    diagnostic = "" if any_positive else "zero or infeasible demand at every slab"
    return RevenueReport(per_slab=tuple(lines), total=total, plan=plan, diagnostic=diagnostic)


def _plan_sort_key(plan: SlabPlan) -> tuple[int, float]:
    return (plan.n_slabs, plan.slabs[0].price)


def optimize_slab_structure(
    candidate_plans: Iterable[SlabPlan],
    demand_fn: DemandFn | None = None,
) -> tuple[SlabPlan, RevenueReport]:
    """Exhaustively evaluate candidates and return the revenue maximizer.

    Ties break to fewer slabs, then to the lower first-slab price, so the
    winner does not depend on candidate order.
    """
    best: tuple[SlabPlan, RevenueReport] | None = None
    for plan in candidate_plans:
        report = expected_revenue(plan, demand_fn)
        if (
            best is None
            or report.total > best[1].total
            or (report.total == best[1].total and _plan_sort_key(plan) < _plan_sort_key(best[0]))
        ):
            best = (plan, report)
    if best is None:
        raise InvalidParameterError("no candidate plans supplied")
    return best


def best_by_slab_count(
    candidate_plans: Iterable[SlabPlan],
    demand_fn: DemandFn | None = None,
) -> dict[int, tuple[SlabPlan, RevenueReport]]:
    """Revenue maximizer among candidates of each slab count."""
    winners: dict[int, tuple[SlabPlan, RevenueReport]] = {}
    for plan in candidate_plans:
        report = expected_revenue(plan, demand_fn)
        held = winners.get(plan.n_slabs)
        if (
            held is None
            or report.total > held[1].total
            or (report.total == held[1].total and _plan_sort_key(plan) < _plan_sort_key(held[0]))
        ):
            winners[plan.n_slabs] = (plan, report)
    if not winners:
        raise InvalidParameterError("no candidate plans supplied")
    return winners


def discount_ladder_plans(
    context: ResponseContext,
    base_prices: Sequence[float],
    slab_counts: Sequence[int],
    discount: float = 0.05,
    acceptance: float = 0.5,
    attention_span: int = 2,
) -> Iterator[SlabPlan]:
    """Candidate family: unit price falls by a fixed fraction per rung.

    For each base price p0 and slab count S the ladder prices are
    p0 * (1 - discount)**k for k = 0..S-1 (strictly decreasing per unit as
    rungs ascend), with one shared context and a constant acceptance
    probability per rung.
    """
    if not 0.0 < discount < 1.0:
        raise InvalidParameterError(f"discount must be in (0, 1): {discount}")
    for count in slab_counts:
        if count < 1:
            raise InvalidParameterError(f"slab count must be at least 1: {count}")
        for p0 in base_prices:
            prices = [p0 * (1.0 - discount) ** k for k in range(count)]
            yield SlabPlan(
                slabs=tuple(PlanSlab(price=p, context=context) for p in prices),
                acceptance_probs=(acceptance,) * count,
                attention_span=attention_span,
            )


def _fit_length(values: Sequence[float], n: int) -> tuple[float, ...]:
    vals = tuple(values)
    if len(vals) >= n:
        return vals[:n]
    return vals + (vals[-1],) * (n - len(vals))


def plan_for_consumer(
    consumer: Consumer,
    own_offer: Offer,
    other_offer: Offer,
    commodity: int,
) -> SlabPlan:
    """Plan a single consumer faces on one commodity's slab ladder.

    Slab k pairs with the other offer's rung of the same rank (clamped to
    its last rung), carries the consumer's per-slab motive, and keeps the
    consumer's own minimums. Acceptance probabilities stretch to the slab
    count by repeating the last entry.
    """
    if commodity not in (1, 2):
        raise InvalidParameterError(f"commodity must be 1 or 2: {commodity}")
    motive_at = consumer.motive1 if commodity == 1 else consumer.motive2
    own_min = consumer.min_qty1 if commodity == 1 else consumer.min_qty2
    cross_min = consumer.min_qty2 if commodity == 1 else consumer.min_qty1
    slabs = []
    for k, slab in enumerate(own_offer.slabs):
        other = other_offer.slabs[min(k, other_offer.n_slabs - 1)]
        slabs.append(
            PlanSlab(
                price=slab.unit_price,
                context=ResponseContext(
                    motive=motive_at(k),
                    budget=consumer.budget,
                    cross_price=other.unit_price,
                    own_min_qty=own_min,
                    cross_min_qty=cross_min,
                ),
            )
        )
    return SlabPlan(
        slabs=tuple(slabs),
        acceptance_probs=_fit_length(consumer.acceptance_probs, len(slabs)),
        attention_span=consumer.attention_span,
    )


def plan_for_market(
    market: Sequence[Consumer],
    own_offer: Offer,
    other_offer: Offer,
    commodity: int,
) -> SlabPlan:
    """Market-level plan: summed budgets/minimums, strongest per-slab motive.

    Acceptance probabilities and attention span come from the first consumer
    (the walk is a single representative shopper for the pooled demand).
    """
    if not market:
        raise InvalidParameterError("market must contain at least one consumer")
    if commodity not in (1, 2):
        raise InvalidParameterError(f"commodity must be 1 or 2: {commodity}")
    budget = sum(c.budget for c in market)
    own_min = sum(c.min_qty1 if commodity == 1 else c.min_qty2 for c in market)
    cross_min = sum(c.min_qty2 if commodity == 1 else c.min_qty1 for c in market)
    slabs = []
    for k, slab in enumerate(own_offer.slabs):
        other = other_offer.slabs[min(k, other_offer.n_slabs - 1)]
        motive = max(
            (c.motive1(k) if commodity == 1 else c.motive2(k)) for c in market
        )
        slabs.append(
            PlanSlab(
                price=slab.unit_price,
                context=ResponseContext(
                    motive=motive,
                    budget=budget,
                    cross_price=other.unit_price,
                    own_min_qty=own_min,
                    cross_min_qty=cross_min,
                ),
            )
        )
    return SlabPlan(
        slabs=tuple(slabs),
        acceptance_probs=_fit_length(market[0].acceptance_probs, len(slabs)),
        attention_span=market[0].attention_span,
    )


@dataclass(frozen=True)
class DomainRevenue:
    label: str
    domain: DomainSpec
    report: RevenueReport


@dataclass(frozen=True)
class DomainComparison:
    """Domains ranked by measured expected revenue, best first.

    The ranking records what the numbers say; no ordering across domain
    kinds is assumed or asserted.
    """

    ranked: tuple[DomainRevenue, ...]


def compare_domains(
    domains: Sequence[DomainSpec],
    market: Sequence[Consumer],
    plans: Sequence[SlabPlan] | None = None,
    labels: Sequence[str] | None = None,
    commodity: int = 1,
) -> DomainComparison:
    """Rank domains by the expected revenue each earns from a shared market.

    One plan per domain; when plans are omitted each domain is planned for
    the pooled market via plan_for_market. Equal totals keep input order.
    """
    if len(domains) < 2:
        raise InvalidParameterError("need at least two domains to compare")
    if plans is None:
        plans = [
            plan_for_market(
                market,
                d.offer1 if commodity == 1 else d.offer2,
                d.offer2 if commodity == 1 else d.offer1,
                commodity,
            )
            for d in domains
        ]
    if len(plans) != len(domains):
        raise InvalidParameterError("need exactly one plan per domain")
    if labels is None:
        labels = [d.kind.value for d in domains]
    if len(labels) != len(domains):
        raise InvalidParameterError("need exactly one label per domain")
    entries = [
        DomainRevenue(label=label, domain=domain, report=expected_revenue(plan))
        for label, domain, plan in zip(labels, domains, plans)
    ]
    order = sorted(range(len(entries)), key=lambda i: (-entries[i].report.total, i))
    return DomainComparison(ranked=tuple(entries[i] for i in order))
