"""Comparison-based majority finding: algorithms, certificates, experiments.

Balls have hidden colors reachable only through a counting equality oracle.
The package provides the classic two-pass baseline, a randomized Las Vegas
algorithm that beats it on average, transcript-backed certificates with an
independent checker, an adversary-world laboratory for the matching lower
bound, and a benchmark CLI.
"""

from .answers import Answer, Certificate
from .boyer_moore import boyer_moore
from .certify import (
    CheckResult,
    EqStructure,
    InconsistentTranscript,
    answer_matches_brute_force,
    brute_force_majority,
    build_eq_structure,
    check_majority_claim,
    check_no_majority_claim,
    lift_certificate,
    verify_run,
)
from .core import (
    ComparisonRecord,
    CountingOracle,
    DistributionSpec,
    Instance,
    generate,
    parse_distribution,
    read_instance,
    relabel,
    write_instance,
)
from .lowerbound import (
    STRATEGIES,
    AdversaryWorld,
    BalanceStats,
    ComponentState,
    ConvergenceError,
    beta_interval,
    integrate,
    lower_bound_constant,
    merge_step,
    normal_cdf,
    predict_bound,
    simulate_balance,
)
from .randomized import (
    BETA_HIGH,
    BETA_LOW,
    LevelStats,
    Params,
    RunStats,
    SampleEstimate,
    balanced,
    classify_branch,
    estimate_frequencies,
    heavy,
    light,
    majority,
)
from .rng import RandomStream, derive_seed

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "Certificate",
    "boyer_moore",
    "CheckResult",
    "EqStructure",
    "InconsistentTranscript",
    "answer_matches_brute_force",
    "brute_force_majority",
    "build_eq_structure",
    "check_majority_claim",
    "check_no_majority_claim",
    "lift_certificate",
    "verify_run",
    "ComparisonRecord",
    "CountingOracle",
    "DistributionSpec",
    "Instance",
    "generate",
    "parse_distribution",
    "read_instance",
    "relabel",
    "write_instance",
    "STRATEGIES",
    "AdversaryWorld",
    "BalanceStats",
    "ComponentState",
    "ConvergenceError",
    "integrate",
    "beta_interval",
    "lower_bound_constant",
    "merge_step",
    "normal_cdf",
    "predict_bound",
    "simulate_balance",
    "BETA_HIGH",
    "BETA_LOW",
    "LevelStats",
    "Params",
    "RunStats",
    "SampleEstimate",
    "balanced",
    "classify_branch",
    "estimate_frequencies",
    "heavy",
    "light",
    "majority",
    "RandomStream",
    "derive_seed",
    "__version__",
]
