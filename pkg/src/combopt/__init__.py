"""combopt: configurable metaheuristic optimization for combinatorial design problems."""

from .annealing import SaConfig, acceptance_probability, cool, sa_run
from .errors import (
    CapExceededError,
    CombOptError,
    ConfigError,
    EvaluationError,
    GenerationError,
)
from .evaluators import brute_force_optimum, make_evaluator
from .generation import (
    generate,
    generate_constrained,
    generate_population,
    generate_unconstrained,
)
from .genetic import (
    GaConfig,
    crossover_free,
    crossover_grouped,
    ga_run,
    mutate_free,
    mutate_swap,
    mutate_within_group,
    mutation_rate_update,
    partner_select,
    similarity,
    tournament_select,
)
from .objective import ObjectiveBreakdown, compose_objective, penalty, rank
from .problem import (
    Decision,
    DecisionGroup,
    EvaluatorSpec,
    ObjectiveSpec,
    ProblemDefinition,
    Solution,
    allowed,
    is_feasible,
    validate_problem,
)
from .record import OptimizationRecord
from .reporting import write_reports
from .runner import (
    RunConfig,
    build_optimizer,
    config_digest,
    load_config,
    parse_config,
    run,
    serialize_config,
)

__version__ = "0.1.0"
