"""Exact polynomial ideal computations, Noetherian operators and
degree-bounded membership certificates over the rationals."""

from .certifier import (
    Certificate,
    DegreeBoundReport,
    ProblemInstance,
    certify,
    degree_bound,
    homogeneous_equivalence_check,
    hypothesis_check,
    solve_bounded,
    verify_certificate,
)
from .errors import Limits, LinkageError, ResourceBound, SplitRejected
from .groebner import (
    GroebnerBasis,
    IdealPresentation,
    buchberger,
    colon_ideal,
    contains,
    dimension,
    eliminate,
    homogeneous_closure,
    intersect,
    membership_certificate,
    normal_form,
    quotient,
    radical_membership,
    saturation,
)
from .hilbert import HilbertData, hilbert_data
from .noetherian import NoetherianSystem, build_noetherian_system, noetherian_membership
from .parsing import ParseError, parse_polynomial
from .poly import GREVLEX, MonomialOrder, Polynomial, VariableContext
from .resolution import GradedComplex, minimal_resolution, regularity, schreyer_resolution

__version__ = "0.1.0"
