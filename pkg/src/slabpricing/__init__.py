"""Slab-pricing engine.

Consumer demand under convex, mixed, and non-convex price domains; the
price-response function with its analytic properties; expected revenue over
slab ladders with an exhaustive structure optimizer; a seeded Monte Carlo
oracle; and supply-demand equilibrium. Driven from scenario files via the
``slabprice`` command.
"""

from .demand import (
    AggregateDemand,
    Consumer,
    DomainKind,
    DomainSpec,
    MixedDemand,
    Offer,
    PairDemand,
    Slab,
    TwoStageDemand,
    affordable,
    aggregate_demand,
    budget_exhausting_qty,
    classify_domain,
    demand_convex_pair,
    demand_mixed_pair,
    demand_nonconvex_pair,
    make_domain,
    nonconvex_initial_composite,
)
from .equilibrium import (
    EquilibriumPoint,
    FitMethod,
    SupplyLine,
    fit_supply_line,
    solve_equilibrium,
)
from .errors import (
    BracketError,
    InfeasibleError,
    InvalidParameterError,
    NumericalError,
    PricingError,
    SchemaError,
)
from .membership import (
    ChoiceProblem,
    ConsistencyVerdict,
    MembershipForm,
    MembershipSpec,
    aggregate_degree,
    choose,
    eval_membership,
    two_way_consistency_check,
)
from .price_response import (
    WTP_REFERENCE_PRICES,
    ResponseContext,
    ResponsePoint,
    arc_elasticity,
    hazard_rate,
    point_elasticity,
    price_response,
    response_slope,
    willingness_to_pay,
)
from .revenue import (
    DomainComparison,
    DomainRevenue,
    PlanSlab,
    RevenueReport,
    SlabContribution,
    SlabPlan,
    as_response_point,
    best_by_slab_count,
    compare_domains,
    discount_ladder_plans,
    expected_revenue,
    optimize_slab_structure,
    plan_for_consumer,
    plan_for_market,
    purchase_probability,
    slab_demand_fn,
)
from .scenario import (
    BUNDLED_SCENARIOS,
    Scenario,
    bundled_scenario_path,
    parse_scenario,
    scenario_from_dict,
    scenario_to_dict,
    serialize_scenario,
)
from .simulate import MCEstimate, SimConfig, estimate_expected_revenue_mc, simulate_consumer

__version__ = "0.1.0"

__all__ = [
    "AggregateDemand",
    "BracketError",
    "BUNDLED_SCENARIOS",
    "ChoiceProblem",
    "ConsistencyVerdict",
    "Consumer",
    "DomainComparison",
    "DomainKind",
    "DomainRevenue",
    "DomainSpec",
    "EquilibriumPoint",
    "FitMethod",
    "InfeasibleError",
    "InvalidParameterError",
    "MCEstimate",
    "MembershipForm",
    "MembershipSpec",
    "MixedDemand",
    "NumericalError",
    "Offer",
    "PairDemand",
    "PlanSlab",
    "PricingError",
    "ResponseContext",
    "ResponsePoint",
    "RevenueReport",
    "Scenario",
    "SchemaError",
    "SimConfig",
    "Slab",
    "SlabContribution",
    "SlabPlan",
    "SupplyLine",
    "TwoStageDemand",
    "WTP_REFERENCE_PRICES",
    "affordable",
    "aggregate_degree",
    "aggregate_demand",
    "arc_elasticity",
    "as_response_point",
    "best_by_slab_count",
    "budget_exhausting_qty",
    "bundled_scenario_path",
    "choose",
    "classify_domain",
    "compare_domains",
    "demand_convex_pair",
    "demand_mixed_pair",
    "demand_nonconvex_pair",
    "discount_ladder_plans",
    "estimate_expected_revenue_mc",
    "eval_membership",
    "expected_revenue",
    "fit_supply_line",
    "hazard_rate",
    "make_domain",
    "nonconvex_initial_composite",
    "optimize_slab_structure",
    "parse_scenario",
    "plan_for_consumer",
    "plan_for_market",
    "point_elasticity",
    "price_response",
    "purchase_probability",
    "response_slope",
    "scenario_from_dict",
    "scenario_to_dict",
    "serialize_scenario",
    "simulate_consumer",
    "slab_demand_fn",
    "solve_equilibrium",
    "two_way_consistency_check",
    "willingness_to_pay",
]
