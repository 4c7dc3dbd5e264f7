"""Linear dynamics of weighted shifts and lambda*I + mu*B on p-adic sequence spaces c0."""
from .criteria import (Property, Rule, SubsequenceGenerator, Verdict, check_precedence, decide,
                       decide_bilateral_hypercyclic, decide_bilateral_supercyclic, decide_finite_dim,
                       decide_lambda_mu, decide_perturbed, decide_unilateral, perturbation_reduce)
from .dynamics import (CriterionReport, ObstructionWitness, TransitivityWitness, finite_dim_obstruction,
                       open_set_invariance_check, obstruction_witness_lambda_mu, orbit, scaling_sequence,
                       transitivity_witness, verify_hc_criterion, verify_sc_criterion)
from .errors import *  # noqa: F401,F403
from .field import ONE_NORM, ZERO, NormExp, PadicField, PadicScalar
from .ops import (BilateralBackwardShift, ForwardShift, Identity, LambdaMu, RightInverseLambdaMu, ScalarMul,
                  UnilateralBackwardShift, WeightModel, apply, apply_power, conjugated_weight, operator_norm,
                  right_inverse, right_inverse_apply)
from .seq import INTEGERS, NATURALS, Ball, FinVector, IndexDomain, RationalSeq, dist, parse_vector

__version__ = "0.1.0"
