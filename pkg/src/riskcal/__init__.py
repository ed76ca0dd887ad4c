"""riskcal: failure-risk comparison of worst-case and probabilistic robust
controllers for the first-order uncertain plant q/(s - p)."""

from .firstorder import (
    TABLE1_CASES,
    BoundaryDataset,
    FirstOrderCase,
    Margins,
    PolarAuxiliaries,
    boundary_dataset,
    coverage_probability,
    instability_fraction,
    instability_ratio,
    margins,
    polar_auxiliaries,
    prob_instability_a,
    prob_instability_b,
    stable_a,
    stable_b,
    stable_fraction,
    sufficient_condition,
)
from .montecarlo import (
    ProbabilityEstimate,
    SamplePlan,
    clopper_pearson,
    estimate_probability,
    required_samples,
    sample_gaussian_pair,
    uniform_box_fraction,
)
from .quadrature import QuadratureError, QuadratureResult, erf, integrate
from .risk import (
    RiskScenario,
    flat_degradation_ratio,
    ratio_below_one_certificate,
    risk_probabilistic,
    risk_ratio,
    risk_worstcase,
)
from .stability import (
    CoefficientIndex,
    CoefficientKind,
    Polynomial,
    RationalTF,
    closed_loop_charpoly,
    coefficient_offset,
    default_slack,
    destabilizing_value,
    is_hurwitz,
    poly_add,
    poly_mul,
    substitute_coefficient,
)

__version__ = "0.1.0"
