"""gvkit: exact and empirical tools for Gilbert-Varshamov type bounds.

Classical [n, k, d]_q codes and symplectic self-orthogonal codes over small
finite fields, exact ball volumes, truncated inclusion-exclusion
certificates, and Monte Carlo checks of the probabilistic ingredients.
"""

__version__ = "0.1.0"

from .errors import DomainError, GVKitError, ResourceCapError, UsageError
from .field import GF, FieldElement, field, field_arithmetic, hamming_weight
from .combinatorics import (
    hamming_volume,
    hyperplane_pair_count,
    q_ary_entropy,
    single_vector_intersection_formula,
    symplectic_volume,
)
from .linear_codes import (
    BallSampler,
    LinearCode,
    encode,
    min_hamming_distance,
    projective_messages,
    sample_generator_matrix,
    sample_uniform_ball,
)
from .symplectic import (
    QuantumParams,
    SymplecticCode,
    ball_orthogonal_intersection_count,
    min_symplectic_distance,
    sample_self_orthogonal_code,
    symplectic_dual,
    symplectic_inner,
    symplectic_weight,
    to_quantum_params,
)
from .bounds import (
    CertificateReport,
    CodeParams,
    ConstantsReport,
    bonferroni_failure_bound,
    certify_classical,
    derive_constants,
    feng_ma_condition,
    gilbert_bound,
    quantum_hamming_check,
    quantum_improved_certify,
    quantum_singleton_check,
    quantum_union_certify,
    varshamov_condition,
)
from .montecarlo import (
    MonteCarloEstimate,
    estimate_min_distance_failure,
    estimate_sum_in_ball,
    exact_failure_probability_tiny,
    verify_intersection_concentration,
)
