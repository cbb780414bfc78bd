"""Bertrand-MNL markets: equilibria, online assortment policies, segmentation."""

from .equilibrium import (
    DomainError,
    EquilibriumOutcome,
    ItemCatalog,
    SolverError,
    best_response_price,
    equilibrium_outcome,
    mnl_demand,
    perishable_outcome,
    price_game_potential,
    quality_for_target_revenue,
    solo_revenue_for_quality,
    solve_no_purchase,
    solve_share,
)
from .lp import (
    ColumnSet,
    LpSolution,
    enumerate_columns,
    simplex_solve,
    solve_opt,
    solve_opt_fixed_rev,
)
from .network import (
    BipartiteMarket,
    ConsistencyReport,
    EquilibriumReport,
    VerificationReport,
    check_consistency,
    network_demand,
    seller_best_response,
    seller_utility,
    solve_network_equilibrium,
    verify_equilibrium,
)
from .policies import (
    InventoryState,
    OnlineInstance,
    PolicyDecision,
    classify_heavy,
    exponential_weight,
    greedy_all_next,
    hybrid_next,
    modified_hybrid_next,
    solo_demands,
)
from .segmentation import (
    FlowNetwork,
    Pool,
    Segmentation,
    build_flow_network,
    compare_segmented_vs_whole,
    equilibrate_pool,
    max_weight_flow,
    pools_from_flow,
    segment_market,
)
from .simulate import (
    POLICIES,
    EpisodeResult,
    HeterogeneousInstance,
    RatioEstimate,
    adversarial_instance,
    always_offer_ratio,
    episode_rng,
    estimate_ratio,
    hybrid_ratio_bound,
    run_episode,
    sample_choice,
    threshold_headroom,
)

__all__ = [
    "BipartiteMarket",
    "ColumnSet",
    "ConsistencyReport",
    "DomainError",
    "EpisodeResult",
    "EquilibriumOutcome",
    "EquilibriumReport",
    "FlowNetwork",
    "HeterogeneousInstance",
    "InventoryState",
    "ItemCatalog",
    "LpSolution",
    "OnlineInstance",
    "POLICIES",
    "PolicyDecision",
    "Pool",
    "RatioEstimate",
    "Segmentation",
    "SolverError",
    "VerificationReport",
    "adversarial_instance",
    "always_offer_ratio",
    "best_response_price",
    "build_flow_network",
    "check_consistency",
    "classify_heavy",
    "compare_segmented_vs_whole",
    "enumerate_columns",
    "episode_rng",
    "equilibrate_pool",
    "equilibrium_outcome",
    "estimate_ratio",
    "exponential_weight",
    "greedy_all_next",
    "hybrid_next",
    "hybrid_ratio_bound",
    "max_weight_flow",
    "mnl_demand",
    "modified_hybrid_next",
    "network_demand",
    "perishable_outcome",
    "pools_from_flow",
    "price_game_potential",
    "quality_for_target_revenue",
    "run_episode",
    "sample_choice",
    "segment_market",
    "seller_best_response",
    "seller_utility",
    "simplex_solve",
    "solo_demands",
    "solo_revenue_for_quality",
    "solve_network_equilibrium",
    "solve_no_purchase",
    "solve_opt",
    "solve_opt_fixed_rev",
    "solve_share",
    "threshold_headroom",
    "verify_equilibrium",
]

__version__ = "0.1.0"
