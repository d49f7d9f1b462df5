"""Maximum-entropy ensembles of random simplicial complexes.

Samplers, exact probabilities and moments for Erdos-Renyi graphs, random flag
complexes, Linial-Meshulam complexes, the multi-parameter Kahle model and the
per-simplex independent model, plus small-n enumeration and a dual Newton
solver for Lagrange multipliers.
"""

from .complex_core import (
    ObservableCounts,
    SimplicialComplex,
    a_value,
    b_value,
    closure,
    counts,
    filled_skeleton,
    from_json,
    full_simplex,
    skeleton,
    to_json,
)
from .enumeration import (
    ComplexSpace,
    ExactDistribution,
    entropy,
    enumerate_space,
    exact_distribution,
    feasible_perturbations,
    kl_divergence,
    log_partition_function,
    partition_function,
)
from .generators import (
    ComplexBatch,
    GeneralParams,
    KahleParams,
    RngState,
    flag_complex,
    sample_batch,
    sample_flag,
    sample_general_delta,
    sample_gnp,
    sample_kahle,
    sample_linial_meshulam,
)
from .maxent import (
    FitReport,
    MaxEntProblem,
    gibbs_distribution,
    solve_theta,
    tilde_distribution_n3,
    verify_maxent,
)
from .measures import (
    conditional_probability,
    expected_a,
    expected_b,
    expected_f,
    expected_phi,
    hamiltonian_general,
    log_prob_flag,
    log_prob_general,
    log_prob_gnp,
    log_prob_kahle,
    log_prob_lm,
)
from .observables import Observable, parse_observable

__version__ = "0.1.0"
