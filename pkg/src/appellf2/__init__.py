"""Appell F2, its reductions and continuations, Laplace integrals of 1F1
products, and the matrix elements built on them."""

from .appell import (
    ContinuationParams,
    F1Params,
    F2Params,
    f1_finite_sum,
    f1_series,
    f2_continuation_lemma6,
    f2_continuation_lemma8,
    f2_equal_params_lemma9,
    f2_eval,
    f2_lemma10,
    f2_recurrence_residual,
    f2_reduce,
    f2_series,
)
from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    HypergeometricError,
    NoStrategyError,
    ParameterError,
    PoleError,
    SingularConfigurationError,
)
from .laplace import JspParams, LaplaceProductSpec, appendix_identity, landau_lifshitz_J, laplace_product
from .oracle import f2_bruteforce, integrate_semiinfinite
from .physics import (
    KratzerBasis,
    MatrixBlock,
    OscillatorBasis,
    build_perturbation_matrix,
    kratzer_matrix_element,
    spiked_matrix_element,
    variational_eigenvalues,
)
from .special_core import EvaluationResult, IdentityReport, hyp1f1, hyp2f1, pfq

__version__ = "0.1.0"
