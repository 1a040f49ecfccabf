"""Stability analysis for two-sided matching markets with substitutable choices."""

from ._core import AgentId, Limits, Mode, Side, default_limits
from .choice import (
    UNRANKED,
    BlairVerdict,
    ChoiceFunction,
    PreferenceList,
    ValidationResult,
    blair_compare,
    choose,
    induce_choice,
    is_consistent,
    is_path_independent,
    is_substitutable,
    make_choice_function,
    make_preference_list,
    worker_prefers_m21,
)
from .domination import (
    SET_KEYS,
    ClassificationRecord,
    DominationKind,
    DominationWitness,
    classify,
    dominates,
    find_dominations,
    in_core,
    in_firm_quasi_core,
    in_firm_quasi_setwise,
    in_setwise_stable,
    in_worker_quasi_core,
    in_worker_quasi_setwise,
    prefers,
    setwise_dominates,
    stability_sets,
)
from .errors import (
    ConfigInvalid,
    ConsistencyViolation,
    ConstructionFailed,
    DuplicateLabel,
    EmptyCoalition,
    EmptyT,
    IdenticalMatchings,
    InvalidChoiceEntry,
    InvalidPreferenceList,
    ManyToOneCapacityViolation,
    MarketSyntaxError,
    MatchkitError,
    MissingChoiceEntry,
    NotABlockingPair,
    NotSingleton,
    PreconditionFailed,
    RetriesExhausted,
    SizeLimitExceeded,
    SubstitutabilityViolation,
    TNotInDesireSet,
    UnknownAgent,
)
from .gen import GenConfig, SplitMix64, Strategy, gen_corpus, gen_market, mix64, subseed
from .model import (
    Coalition,
    Market,
    Matching,
    enumerate_matchings,
    make_market,
    make_matching,
    matched,
    unmatched,
)
from .stability import (
    BlockingPair,
    DesireSets,
    QuasiViolation,
    blocked_by_agent,
    blocking_pairs,
    desire_sets,
    first_firm_quasi_violation,
    first_worker_quasi_violation,
    individually_rational,
    is_firm_quasi_stable,
    is_firm_quasi_stable_definitional,
    is_pairwise_stable,
    is_worker_quasi_stable,
    is_worker_quasi_stable_definitional,
)
from .theorems import (
    THEOREMS,
    Theorem,
    TheoremResult,
    TheoremStatus,
    check_theorem,
    theorem_ids,
    verify_market,
)
from .witness import (
    ConstructionReport,
    blocking_pair_from_quasi_core_violation_m21,
    domination_from_blocking_pair_m21,
    domination_from_double_quasi_m2m,
    domination_from_firm_block_m21,
    setwise_domination_from_qw_violation_m2m,
)
from .cli import parse_market, parse_matching_spec, serialize_market

__version__ = "0.1.0"

__all__ = [
    "AgentId",
    "BlairVerdict",
    "BlockingPair",
    "ChoiceFunction",
    "ClassificationRecord",
    "Coalition",
    "ConfigInvalid",
    "ConsistencyViolation",
    "ConstructionFailed",
    "ConstructionReport",
    "DesireSets",
    "DominationKind",
    "DominationWitness",
    "DuplicateLabel",
    "EmptyCoalition",
    "EmptyT",
    "GenConfig",
    "IdenticalMatchings",
    "InvalidChoiceEntry",
    "InvalidPreferenceList",
    "Limits",
    "ManyToOneCapacityViolation",
    "Market",
    "MarketSyntaxError",
    "Matching",
    "MatchkitError",
    "MissingChoiceEntry",
    "Mode",
    "NotABlockingPair",
    "NotSingleton",
    "PreconditionFailed",
    "PreferenceList",
    "QuasiViolation",
    "RetriesExhausted",
    "SET_KEYS",
    "Side",
    "SizeLimitExceeded",
    "SplitMix64",
    "Strategy",
    "SubstitutabilityViolation",
    "THEOREMS",
    "TNotInDesireSet",
    "Theorem",
    "TheoremResult",
    "TheoremStatus",
    "UNRANKED",
    "UnknownAgent",
    "ValidationResult",
    "blair_compare",
    "blocked_by_agent",
    "blocking_pair_from_quasi_core_violation_m21",
    "blocking_pairs",
    "check_theorem",
    "choose",
    "classify",
    "default_limits",
    "desire_sets",
    "dominates",
    "domination_from_blocking_pair_m21",
    "domination_from_double_quasi_m2m",
    "domination_from_firm_block_m21",
    "enumerate_matchings",
    "find_dominations",
    "first_firm_quasi_violation",
    "first_worker_quasi_violation",
    "gen_corpus",
    "gen_market",
    "in_core",
    "in_firm_quasi_core",
    "in_firm_quasi_setwise",
    "in_setwise_stable",
    "in_worker_quasi_core",
    "in_worker_quasi_setwise",
    "individually_rational",
    "induce_choice",
    "is_consistent",
    "is_firm_quasi_stable",
    "is_firm_quasi_stable_definitional",
    "is_pairwise_stable",
    "is_path_independent",
    "is_substitutable",
    "is_worker_quasi_stable",
    "is_worker_quasi_stable_definitional",
    "make_choice_function",
    "make_market",
    "make_matching",
    "make_preference_list",
    "matched",
    "mix64",
    "parse_market",
    "parse_matching_spec",
    "prefers",
    "serialize_market",
    "setwise_dominates",
    "setwise_domination_from_qw_violation_m2m",
    "stability_sets",
    "subseed",
    "theorem_ids",
    "unmatched",
    "verify_market",
    "worker_prefers_m21",
]
