"""Exact interpolation between finite-dimensional weighted Hilbert couples.

The package computes the quadratic K-, J-, K_p- and E_p-functionals of
weighted l2 couples, constructs couple contractions mapping a given
element onto a K-dominated target together with machine-checkable
certificates, represents and fits positive regular Pick functions by
measures, and evaluates the classical quadratic interpolation methods
(K-method, J-method, reiteration, power-p, complex method).
"""

from .couple import (
    WeightVector,
    TimeGrid,
    k_functional,
    K_functional,
    k_oracle,
    K_oracle,
    Kp_functional,
    Ep_functional,
    J_functional,
    operator_norms,
    relative_k_bound_check,
    diagonalize_pair,
)
from .polynomials import RealPolynomial
from .calderon import (
    ZeroSplitting,
    ContractionCertificate,
    check_domination,
    preprocess_phases,
    build_domination_polynomial,
    split_zeros,
    assemble_contraction,
    construct_calderon_map,
    construct_relative_map,
    scaled_map,
    loewner_maps,
    lp_experimental_matrix,
    verify_certificate,
)
from .pick import (
    ExtendedMeasure,
    PickFunctionRep,
    TwoVarMeasure,
    FitResult,
    geometric_measure,
    geometric_constant,
    sample_pick_measure,
    eval_pick,
    quadratic_norm_check,
    fit_pick_measure,
    exact_interp_randomized_test,
    typeH_profile,
    typeH_bound_check,
    exponent_envelope_check,
    dual_transforms,
    donoghue_transform,
    matrix_monotone_test,
    matrix_concavity_test,
    hansen_check,
    two_var_apply,
    two_var_interp_test,
)
from .methods import (
    MethodSpec,
    ComplexMethodConfig,
    k_method_norm,
    h_from_j_measure,
    j_method_norm_direct,
    kj_bijection_check,
    reiterate,
    power_p_function,
    poisson_kernel,
    complex_method_norm,
    geometric_j_measure,
)

__version__ = "0.1.0"
