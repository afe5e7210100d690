"""Exact q-dual sequences: Laurent-polynomial arithmetic, q-special
functions, the q-dual transform, and a checker for identities between
dual sequences."""

from qdual._kernels import BACKEND
from qdual.errors import DomainError, ExponentOverflow, NonExactDivision, QDualError, RegistryMismatch
from qdual.exact import LaurentPoly, RatFunc, Registry, diff_witness, rf_eq, standard_registry
from qdual.harness import CATALOG, IDENTITY_IDS, SuiteConfig, check, run_suite, summarize
from qdual.qfunctions import gauss_binomial, q_factorial, q_int, q_pochhammer
from qdual.report import IdentityInstance, IdentityReport
from qdual.sequences import (
    Sequence,
    SequenceSpec,
    builtin_sequence,
    dual,
    dual_inverse,
    q_bernoulli,
    q_stirling2,
    symbolic_sequence,
)

__version__ = "0.1.0"
