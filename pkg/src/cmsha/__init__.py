"""Conjectural analytic Tate-Shafarevich orders for the CM curves
attached to primes q ≡ 7 (mod 8).

The pipeline: class group of Q(sqrt(-q)) by quadratic forms, the
canonical Grossencharacter of conductor (sqrt(-q)) and its class-character
twists, their central L-values by smoothed approximate functional
equation, the Chowla-Selberg style Gamma product, and finally the
assembled order with integrality and squareness checks.  `sha_order` is
the one-call entry point; `cli.main` backs the `cmsha` executable.
"""

from .arith import factorize, is_prime, jacobi, sqrt_neg_q_mod, xgcd
from .classgroup import (ClassChar, ClassGroup, QuadForm, characters,
                         class_group, compose, dlog, principal_form, reduce,
                         reduced_forms)
from .curve import CurveModel, curve_model, j_invariant
from .errors import (ConductorError, DomainError, Error, InputError,
                     PrecisionError, PrecisionExhausted, ResourceError,
                     RootNumberUnstable)
from .hecke import (CoeffSeries, Element, HeckeChar, IdealRep, build_psi,
                    coefficients, enumerate_ideals_of_norm, epsilon,
                    psi_ideal)
from .lfun import (CentralValue, TotalL, central_value, smoothed_sum,
                   total_L, truncation)
from .numerics import PrecisionContext, ln_gamma, make_context, principal_root
from .period import GammaProduct, gamma_product
from .report import ShaReport, is_perfect_square, sha_order

__version__ = "0.1.0"

__all__ = [
    "CentralValue", "ClassChar", "ClassGroup", "CoeffSeries", "ConductorError",
    "CurveModel", "DomainError", "Element", "Error", "GammaProduct",
    "HeckeChar", "IdealRep", "InputError", "PrecisionContext",
    "PrecisionError", "PrecisionExhausted", "QuadForm", "ResourceError",
    "RootNumberUnstable", "ShaReport", "TotalL", "build_psi", "characters",
    "class_group", "coefficients", "compose", "curve_model", "dlog",
    "enumerate_ideals_of_norm", "epsilon", "factorize", "gamma_product",
    "is_perfect_square", "is_prime", "j_invariant", "jacobi", "ln_gamma",
    "make_context", "principal_form", "principal_root", "psi_ideal", "reduce",
    "reduced_forms", "sha_order", "smoothed_sum", "sqrt_neg_q_mod", "total_L",
    "truncation", "xgcd",
]
