"""Exact polynomial automorphisms.

Sparse polynomials over Q or Z/mZ, symbolic Jacobians and principal-minor
checks, closed-form automorphism families with their inverses, a
formal-inverse oracle, and a toy block cipher keyed by automorphisms.
"""

from .errors import *  # noqa: F401,F403
from .families import (
    AutomorphismPair,
    Dim4Case,
    Family,
    FamilySpec,
    InvariantForm,
    dim2_extruded,
    dim2_homogeneous,
    dim2_worked_examples,
    dim3_full,
    dim3_partial,
    dim4_partial,
    dimN_full,
    triangular_param,
    worked_example_potentials,
)
from .jacobian import (
    MinorEquation,
    PolyMap,
    PolyMatrix,
    VerifyReport,
    check_keller,
    check_monge_ampere,
    check_parametrized_minors,
    determinant,
    divergence,
    jacobian_matrix,
    potential_to_map,
    principal_minor_sums,
)
from .oracle import (
    NotPolynomialUpTo,
    TruncatedMap,
    back_substitution_inverse,
    exact_inverse,
    formal_inverse,
    is_exact_inverse,
    measure_inverse_degree,
)
from .parse import MapDocument, format_map, parse_map, parse_polynomial
from .poly import NEG_INF, Polynomial, UniPoly, compose, evaluate, partial, total_degree
from .ring import QQ, RingSpec

__version__ = "0.1.0"
