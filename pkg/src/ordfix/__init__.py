"""Fixed-point machinery on finite quasi-ordered (almost-)metric spaces.

Hypothesis checkers, the series-metric construction, iteration engines and
brute-force theorem suites. Hot table scans run in a compiled extension
when available (see :mod:`ordfix.kernels`).
"""
from .compfn import (
    DEFAULT_PLAN,
    GaugeFamily5,
    PointGaugeFamily,
    SamplingPlan,
    ScalarGauge,
    UniformFamily,
    VectorGauge,
    check_comparison,
    check_normal,
    check_normal5,
    compose_family,
    gamma_beta,
    iterate,
    matkowski_reduce,
)
from .contract import (
    ContractionVariant,
    check_contraction,
    check_e10_e11,
    check_monotone,
    hlm,
    hlm_tables,
    progressive_sets,
)
from .errors import GaugeError, GenerationError, InputError, OrdfixError, PreconditionError
from .instances import (
    GeneratorParams,
    InstanceSpec,
    builtin_library,
    gen_random_space,
    gen_theorem_instance,
    get_instance,
    half_map_analytic,
    parse_instance,
)
from .kernels import BACKEND
from .maia import DerivedMetric, build_maia_metric, verify_maia_properties
from .oracle import SuiteParams, SuiteVerdict, brute_picard_check, enumerate_fixed_points, theorem_suite
from .picard import (
    cauchy_certificate,
    classify_picard,
    orbit,
    run_picard,
    run_variable_exponent,
    trace_to_csv,
)
from .spaces import (
    FiniteSpace,
    chain_components,
    check_axioms,
    check_bounds_and_directedness,
    comparable,
    find_chain,
    order_from_pairs,
)

__all__ = [
    "BACKEND",
    "ContractionVariant",
    "DEFAULT_PLAN",
    "DerivedMetric",
    "FiniteSpace",
    "GaugeError",
    "GaugeFamily5",
    "GenerationError",
    "GeneratorParams",
    "InputError",
    "InstanceSpec",
    "OrdfixError",
    "PointGaugeFamily",
    "PreconditionError",
    "SamplingPlan",
    "ScalarGauge",
    "SuiteParams",
    "SuiteVerdict",
    "UniformFamily",
    "VectorGauge",
    "brute_picard_check",
    "build_maia_metric",
    "builtin_library",
    "cauchy_certificate",
    "chain_components",
    "check_axioms",
    "check_bounds_and_directedness",
    "check_comparison",
    "check_contraction",
    "check_e10_e11",
    "check_monotone",
    "check_normal",
    "check_normal5",
    "classify_picard",
    "comparable",
    "compose_family",
    "enumerate_fixed_points",
    "find_chain",
    "gamma_beta",
    "gen_random_space",
    "gen_theorem_instance",
    "get_instance",
    "half_map_analytic",
    "hlm",
    "hlm_tables",
    "iterate",
    "matkowski_reduce",
    "orbit",
    "order_from_pairs",
    "parse_instance",
    "progressive_sets",
    "run_picard",
    "run_variable_exponent",
    "theorem_suite",
    "trace_to_csv",
    "verify_maia_properties",
]

__version__ = "0.1.0"
