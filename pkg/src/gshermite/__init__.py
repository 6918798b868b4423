"""Hermite-function numerics for Gelfand-Shilov spaces and their duals."""

__version__ = "0.1.0"

from .classify import DecayCertificate, classify_dual, classify_test, estimate_gevrey_index
from .coeff import (HermiteRep, SampledGrid, SeqNorm, ThetaVector, analyze, diff, fourier,
                    ladder, log_weight_grid, mul_x, pairing, seq_norm, synthesize)
from .errors import (AlignmentError, CapError, DataError, GSHermiteError, HeadroomError,
                     InsufficientDataError, QuadratureError, SequenceRangeError, ShapeError)
from .hermite import (HermiteIndex, QuadratureRule, deriv_coefficients, gauss_hermite,
                      hermite_deriv, hermite_eval, hermite_table, tensor_eval)
from .kernel import (GrowthCertificate, KernelRep, apply_kernel, kernel_from_bilinear,
                     kernel_growth_check, kernel_of_operator)
from .opcalc import (OperatorExpansion, apply_expansion, build_expansion, fit_normalization,
                     hermite_envelope_check, verify_bound_26, verify_bound_52)
from .weights import (AssociatedFunction, Condition, ConditionCertificate, WeightSequence,
                      assoc_asymptotic_check, assoc_eval, check_condition, eval_Mp)

import types as _types

__all__ = sorted(name for name, obj in globals().items()
                 if not name.startswith("_") and not isinstance(obj, _types.ModuleType))
