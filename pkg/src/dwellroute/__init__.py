"""Routing and dwell-time optimization for revisit-discounted information gain."""

from .dwell_opt import (
    DwellResult,
    DwellSolverConfig,
    InitMode,
    kkt_residual,
    log_objective_gradient,
    optimize_dwell,
    optimize_dwell_symmetric,
)
from .errors import (
    CapacityError,
    DwellrouteError,
    NumericsError,
    SchemaError,
    TsplibFormatError,
    TsplibParseError,
)
from .infogain import (
    InfoParams,
    classification_prob,
    discounted_gain,
    mutual_info,
    mutual_info_deriv,
    total_objective,
    vehicle_objective,
)
from .instance import (
    Instance,
    Metric,
    Point,
    SpatialDist,
    cost,
    generate_random_instance,
    load_json_instance,
    parse_tsplib,
    perturb_depot,
    save_json_instance,
)
from .multi_vehicle import (
    MaximalStrategy,
    Neighborhood,
    ProxyEval,
    SearchConfig,
    Solution,
    VehicleRoute,
    brute_force_multi,
    initial_assignment,
    insertion_gain,
    local_search,
    one_point_move,
    one_point_swap,
    perturb_and_search,
    removal_gain,
    select_maximal,
    solve_multi,
)
from .single_vehicle import SingleSolution, solve_single
from .tsp import Tour, held_karp, solve_tsp, solve_tsp_heuristic, tour_cost

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DwellResult",
    "DwellSolverConfig",
    "DwellrouteError",
    "InfoParams",
    "InitMode",
    "Instance",
    "MaximalStrategy",
    "Metric",
    "Neighborhood",
    "NumericsError",
    "Point",
    "ProxyEval",
    "SchemaError",
    "SearchConfig",
    "SingleSolution",
    "Solution",
    "SpatialDist",
    "Tour",
    "TsplibFormatError",
    "TsplibParseError",
    "VehicleRoute",
    "brute_force_multi",
    "classification_prob",
    "cost",
    "discounted_gain",
    "generate_random_instance",
    "held_karp",
    "initial_assignment",
    "insertion_gain",
    "kkt_residual",
    "load_json_instance",
    "local_search",
    "log_objective_gradient",
    "mutual_info",
    "mutual_info_deriv",
    "one_point_move",
    "one_point_swap",
    "optimize_dwell",
    "optimize_dwell_symmetric",
    "parse_tsplib",
    "perturb_and_search",
    "perturb_depot",
    "removal_gain",
    "save_json_instance",
    "select_maximal",
    "solve_multi",
    "solve_single",
    "solve_tsp",
    "solve_tsp_heuristic",
    "total_objective",
    "tour_cost",
    "vehicle_objective",
]
