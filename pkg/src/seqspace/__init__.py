"""Fractional-order Euler-Riesz difference matrices, sequence spaces and duals."""

__version__ = "0.1.0"

from .basis import basis_element, coefficients, reconstruct, reconstruct_c, residual_paranorm
from .duality import (
    ConditionReport,
    DualVerdict,
    build_U,
    build_V,
    dual_coeff_table,
    dual_membership,
    eval_dual_condition,
    matrix_class_check,
    sup_over_finite_subsets,
)
from .exceptions import DimensionError, NumericError, SpecError
from .estimator import EulerRieszTransformer, SequenceSpaceClassifier
from .kernel import DTYPE, coeff_table, frac_coeff
from .matrices import (
    LowerTriangularMatrix,
    WeightSequence,
    build_B_tau,
    build_B_tau_inv,
    build_delta,
    build_delta_inv,
    build_euler_riesz,
    build_euler_riesz_inv,
    max_identity_defect,
)
from .paranorm import ClassificationReport, ExponentSequence, Verdict, classify, paranorm_g
from .transforms import backward, forward, forward_oracle

__all__ = [
    "DTYPE",
    "ClassificationReport",
    "ConditionReport",
    "DimensionError",
    "DualVerdict",
    "EulerRieszTransformer",
    "ExponentSequence",
    "LowerTriangularMatrix",
    "NumericError",
    "SequenceSpaceClassifier",
    "SpecError",
    "Verdict",
    "WeightSequence",
    "backward",
    "basis_element",
    "build_B_tau",
    "build_B_tau_inv",
    "build_U",
    "build_V",
    "build_delta",
    "build_delta_inv",
    "build_euler_riesz",
    "build_euler_riesz_inv",
    "classify",
    "coeff_table",
    "coefficients",
    "dual_coeff_table",
    "dual_membership",
    "eval_dual_condition",
    "forward",
    "forward_oracle",
    "frac_coeff",
    "matrix_class_check",
    "max_identity_defect",
    "paranorm_g",
    "reconstruct",
    "reconstruct_c",
    "residual_paranorm",
    "sup_over_finite_subsets",
]
