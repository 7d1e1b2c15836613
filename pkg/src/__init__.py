"""
qcg3 - Clebsch-Gordan coefficients of U_q(sl3) for symmetric irreps.

This package computes the q-deformed Clebsch-Gordan coefficients of
(n1,0) (x) (n2,0), exactly in q^(1/4) with square roots of q-numbers or
numerically at a fixed q, and checks them against an independent
brute-force oracle built from the coproduct generators.
"""

__version__ = "1.0.0"
__author__ = "qcg3 Team"

from .config import RunConfig
from .errors import QcgError, VerificationError
from .qscalar import ExactBackend, NumericBackend, ScalarEvaluator, q_factorial, q_number
from .sl3tensor import CoupledState, QcgTable, qcg_table
from .sl3weights import WeightVector, dimension, enumerate_weights, multiplicity
from .su2qcg import Su2CgKey, su2_qcg, su2_qcg_hypergeometric
from .oracle import build_generators, verify_table
from .utils import DocumentStore, QcgLogger

__all__ = [
    "RunConfig",
    "QcgError",
    "VerificationError",
    "ExactBackend",
    "NumericBackend",
    "ScalarEvaluator",
    "q_number",
    "q_factorial",
    "CoupledState",
    "QcgTable",
    "qcg_table",
    "WeightVector",
    "dimension",
    "enumerate_weights",
    "multiplicity",
    "Su2CgKey",
    "su2_qcg",
    "su2_qcg_hypergeometric",
    "build_generators",
    "verify_table",
    "DocumentStore",
    "QcgLogger",
]
