"""Assortment optimisation under regular discrete choice models."""

from .assortment import (
    AssortmentInstance,
    AssortmentSolution,
    BoundReport,
    GuaranteeReport,
    RevenueOrderedResult,
    brute_force_optimum,
    check_technical_bound,
    compute_bounds,
    generate_tight_instance,
    require_optimal_bound,
    revenue_ordered,
    verify_guarantee,
)
from .axioms import (
    AxiomReport,
    CheckResult,
    check_axioms,
    check_demand_submodularity,
    check_purchase_monotonicity,
)
from .errors import (
    BoundCUnavailable,
    DeltaOutOfRange,
    GroundSetTooLarge,
    InvalidEpsilon,
    InvalidParams,
    NonPositiveRevenue,
    RegularityViolation,
    SearchSpaceTooLarge,
)
from .models import (
    ChoiceModel,
    CoverageCapacity,
    HfamModel,
    MallowsModel,
    MixedMnlModel,
    MnlModel,
    ProductSet,
    StochasticPreferenceModel,
    TableCapacity,
    TabularModel,
    TightExampleModel,
    demand,
    evaluate_revenue,
    expand_ranking_model,
    kendall_distance,
)
from .multiperiod import (
    DpTable,
    MultiPeriodInstance,
    check_marginal_value,
    check_nesting_monotonicity,
    lstar_delta,
    revenue_ladder,
    solve_dp,
)
from .stackelberg import (
    FunctionMatroid,
    GraphicMatroid,
    Matroid,
    PricedCopyMatroid,
    StackelbergInstance,
    brute_force_stackelberg,
    check_greedy_nesting,
    check_matroid_axioms,
    check_tiebreak_independence,
    cost_compatible_ordering,
    greedy,
    is_cost_compatible,
    reduce_to_assortment,
    revenue_of_prices,
    uniform_pricing_stackelberg,
)
from .udp import (
    UNPRICED,
    PriceLadder,
    UdpMinInstance,
    UdpRankInstance,
    brute_force_pricing,
    reduce_min_to_assortment,
    reduce_rank_to_assortment,
    simulate_purchases_min,
    simulate_purchases_rank,
    uniform_pricing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
