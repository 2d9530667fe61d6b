"""Exact linear-contract design for combinatorial actions.

Reward oracles and costs live in :mod:`.functions` and :mod:`.costs`; class
certificates in :mod:`.classes`; demand algorithms in :mod:`.demand`; critical
values, optimal contracts and structural diagnostics in :mod:`.contracts`.
"""

from .classes import (
    ClassReport,
    Verdict,
    check_exchange,
    check_monotone,
    check_submodular,
    check_triplet,
    check_well_layered_sampled,
    check_wwl,
    classify,
    structural_classes,
)
from .contracts import (
    EVERYWHERE,
    Breakpoint,
    CriticalSchedule,
    OptimalContract,
    agent_utility,
    brute_force_critical_values,
    check_neighbor_structure,
    check_potential_monotone,
    count_bound,
    enumerate_critical_values,
    epsilon_perturb,
    gamma_set,
    genericity_advisory,
    has_distinct_set_costs,
    is_generic,
    optimal_contract,
    potential,
    potential_ranks,
    principal_utility,
    verify_count_bound,
)
from .costs import Instance, SPACost
from .demand import (
    ALGORITHMS,
    BruteForceOracle,
    DemandResult,
    alt_greedy_gs_spa,
    alt_greedy_ultra_spa,
    best_response_of_size,
    brute_force_demand,
    demand_for_spa,
    greedy_gs1,
    greedy_gs2,
    greedy_gs_spa,
    greedy_ultra1,
    greedy_ultra2,
    greedy_ultra_spa,
    greedy_up_to_t,
    greedy_wwl_symmetric,
    make_oracle,
)
from .errors import CapacityError, ContractsError, InputError, OracleError, ParseError
from .functions import (
    RewardFunction,
    add_symmetric,
    make_additive,
    make_budget_additive,
    make_explicit,
    make_oxs,
    make_symmetric,
    make_unit_demand,
    marginal,
    materialize,
    scale_minus_symmetric,
    truncate,
    value,
)
from .sets import format_rational, parse_rational

__version__ = "0.1.0"
