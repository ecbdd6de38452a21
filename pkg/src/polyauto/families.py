"""Closed-form polynomial automorphism families and their inverses.

Every constructor returns an :class:`AutomorphismPair`.  The inverse is
built from the invariant (or partially invariant) linear forms of the
family, never by a generic inversion routine; the formal-inverse oracle
in :mod:`polyauto.oracle` is the independent cross-check.

Degree predictions assume an integral domain (Q or Z/pZ); over a
composite modulus zero divisors can drop leading terms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    ArityMismatch,
    ConditionViolated,
    DegenerateGenerator,
    MalformedDocument,
    NonInvertibleLambda,
    NotInvertible,
    PolySyntaxError,
    TriangularityViolated,
    ZeroDenominator,
)
from .jacobian import PolyMap, determinant, jacobian_matrix
from .poly import NEG_INF, Polynomial, UniPoly
from .ring import QQ, RingSpec


class Family(enum.Enum):
    DIM2_HOMOGENEOUS = "dim2_homogeneous"
    DIM2_EXTRUDED = "dim2_extruded"
    DIM3_PARTIAL = "dim3_partial"
    DIM3_FULL = "dim3_full"
    DIM4_PARTIAL = "dim4_partial"
    DIMN_FULL = "dimN_full"
    TRIANGULAR_PARAM = "triangular_param"

    @classmethod
    def parse(cls, text: str) -> Family:
        key = text.strip().replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.replace("_", "").lower() == key:
                return member
        raise MalformedDocument(f"unknown family {text.strip()!r}")


class Dim4Case(enum.Enum):
    ONE_INVARIANT = "one-invariant"
    TWO_INVARIANT_A = "two-invariant-a"
    TWO_INVARIANT_B = "two-invariant-b"
    THREE_INVARIANT = "three-invariant"

    @classmethod
    def parse(cls, text) -> Dim4Case:
        if isinstance(text, cls):
            return text
        key = str(text).strip().replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.replace("-", "") == key:
                return member
        raise MalformedDocument(f"unknown dim4 case {text!r}")


@dataclass(frozen=True)
class InvariantForm:
    """Linear form ``sum c_i x_i`` with ``sum c_i P_i = sum c_i x_i + correction``.

    ``correction`` is zero for a fully invariant form.
    """

    coefficients: tuple
    correction: Polynomial

    @property
    def is_full(self) -> bool:
        return self.correction.is_zero()


@dataclass(frozen=True)
class AutomorphismPair:
    family: Family
    forward: PolyMap
    inverse: PolyMap
    invariant_forms: tuple = ()
    predicted_deg_forward: int = 1
    predicted_deg_inverse: int | None = None
    deg_inverse_bound: int | None = None
    jacobian_constant: object = 1
    info: dict = field(default_factory=dict, compare=False)

    @property
    def nvars(self) -> int:
        return self.forward.nvars

    @property
    def ring(self) -> RingSpec:
        return self.forward.ring


# helpers


def _unit_inverse(ring: RingSpec, value, what: str, exc=ZeroDenominator):
    try:
        return ring.inverse(value)
    except NotInvertible:
        raise exc(f"{what} = {value} is not invertible in {ring}") from None


def _check_generator(g: UniPoly, name: str, min_power: int = 2):
    if not g.is_zero() and g.lowest_degree() < min_power:
        raise DegenerateGenerator(
            f"generator {name} = {g} has terms below degree {min_power}; "
            "the map would not be normalized to DP(0) = I")


def _deg(g) -> int | None:
    d = g.degree() if isinstance(g, UniPoly) else g.total_degree()
    return None if d == NEG_INF else d


def _max_deg(*degs) -> int:
    return max([1] + [d for d in degs if d is not None])


def _prod_deg(*degs) -> int:
    out = 1
    for d in degs:
        if d is not None:
            out *= d
    return out


def _coerce_all(ring, values):
    return [ring.coerce(v) for v in values]


def _same_ring(ring, *gens):
    for g in gens:
        if g.ring != ring:
            raise ConditionViolated(f"generator {g} is over {g.ring}, coefficients over {ring}")


def _full(coeffs, n, ring) -> InvariantForm:
    return InvariantForm(tuple(coeffs), Polynomial.zero(n, ring))


# two dimensions


def dim2_homogeneous(a, b, sigma: UniPoly, ring: RingSpec | None = None) -> AutomorphismPair:
    """``u = x + b*s'(ax+by)``, ``v = y - a*s'(ax+by)`` with ``s`` a stream-function generator.

    ``ax + by`` is invariant, which reads off the inverse directly.
    """
    ring = ring or sigma.ring
    _same_ring(ring, sigma)
    a, b = _coerce_all(ring, (a, b))
    if a == 0 and b == 0:
        raise ConditionViolated("(a, b) must not both vanish")
    ds = sigma.derivative()
    _check_generator(ds, "sigma'")
    x, y = Polynomial.variables(2, ring)
    xi = x * a + y * b
    s = ds.substitute(xi)
    forward = PolyMap([x + s * b, y - s * a])
    inverse = PolyMap([x - s * b, y + s * a])
    d = _max_deg(_deg(ds))
    return AutomorphismPair(Family.DIM2_HOMOGENEOUS, forward, inverse, (_full((a, b), 2, ring),),
                            d, d, d)


def dim2_extruded(a, b, sigma: UniPoly, zeta: UniPoly, ring: RingSpec | None = None) -> AutomorphismPair:
    """Three-variable extension ``(x + b*z(w)s'(xi), y - a*z(w)s'(xi), w)``."""
    ring = ring or sigma.ring
    _same_ring(ring, sigma, zeta)
    a, b = _coerce_all(ring, (a, b))
    if a == 0 and b == 0:
        raise ConditionViolated("(a, b) must not both vanish")
    x, y, z = Polynomial.variables(3, ring)
    xi = x * a + y * b
    g = sigma.derivative().substitute(xi) * zeta.substitute(z)
    if g.lowest_degree() < 2:
        raise DegenerateGenerator(f"zeta(z)*sigma'(xi) = {g} has constant or linear terms")
    forward = PolyMap([x + g * b, y - g * a, z])
    inverse = PolyMap([x - g * b, y + g * a, z])
    d = _max_deg(_deg(g))
    return AutomorphismPair(Family.DIM2_EXTRUDED, forward, inverse, (_full((a, b, 0), 3, ring),),
                            d, d, d)


# three dimensions


def dim3_partial(a, b, c, p, q, r, phi: UniPoly, psi: UniPoly,
                 ring: RingSpec | None = None) -> AutomorphismPair:
    """``u = x + phi(xi)``, ``v = y + psi(eta)``, ``w = z - (a/c)phi(xi) - (q/r)psi(eta)``.

    Exactly one of ``ar = cp`` (eta invariant) or ``br = cq`` (xi invariant)
    must hold.  The other linear form picks up a correction term, which the
    inverse peels off first; hence ``deg P^-1 = deg(phi) * deg(psi)``.
    """
    ring = ring or phi.ring
    _same_ring(ring, phi, psi)
    a, b, c, p, q, r = _coerce_all(ring, (a, b, c, p, q, r))
    ic = _unit_inverse(ring, c, "c")
    ir = _unit_inverse(ring, r, "r")
    _check_generator(phi, "phi")
    _check_generator(psi, "psi")
    first = ring.sub(ring.mul(a, r), ring.mul(c, p))   # ar - cp
    second = ring.sub(ring.mul(b, r), ring.mul(c, q))  # br - cq
    if first == 0 and second == 0:
        raise ConditionViolated(
            "both factors of (ar - cp)(br - cq) vanish: xi and eta are proportional, use dim3_full")
    if first != 0 and second != 0:
        raise ConditionViolated(
            f"(ar - cp)(br - cq) = ({first})*({second}) != 0: "
            "need a/c = p/r or b/c = q/r for a unit Jacobian")
    a_c = ring.mul(a, ic)
    q_r = ring.mul(q, ir)
    x, y, z = Polynomial.variables(3, ring)
    xi = x * a + y * b + z * c
    eta = x * p + y * q + z * r
    f, g = phi.substitute(xi), psi.substitute(eta)
    forward = PolyMap([x + f, y + g, z - f * a_c - g * q_r])
    if first == 0:
        # eta invariant; xi shifted by (b - cq/r) psi(eta)
        k = ring.sub(b, ring.mul(c, q_r))
        g_inv = psi.substitute(eta)
        xi_inv = xi - g_inv * k
        f_inv = phi.substitute(xi_inv)
        forms = (_full((p, q, r), 3, ring), InvariantForm((a, b, c), g * k))
        case = "eta-invariant"
    else:
        # xi invariant; eta shifted by (p - ar/c) phi(xi)
        k = ring.sub(p, ring.mul(a_c, r))
        f_inv = phi.substitute(xi)
        eta_inv = eta - f_inv * k
        g_inv = psi.substitute(eta_inv)
        forms = (_full((a, b, c), 3, ring), InvariantForm((p, q, r), f * k))
        case = "xi-invariant"
    inverse = PolyMap([x - f_inv, y - g_inv, z + f_inv * a_c + g_inv * q_r])
    dphi, dpsi = _deg(phi), _deg(psi)
    return AutomorphismPair(Family.DIM3_PARTIAL, forward, inverse, forms,
                            _max_deg(dphi, dpsi), _prod_deg(dphi, dpsi), _prod_deg(dphi, dpsi),
                            info={"case": case})


def dim3_full(a, b, c, phi: UniPoly, psi: UniPoly, ring: RingSpec | None = None) -> AutomorphismPair:
    """Both generators in the single invariant form ``xi = ax + by + cz``."""
    ring = ring or phi.ring
    _same_ring(ring, phi, psi)
    a, b, c = _coerce_all(ring, (a, b, c))
    ic = _unit_inverse(ring, c, "c")
    _check_generator(phi, "phi")
    _check_generator(psi, "psi")
    x, y, z = Polynomial.variables(3, ring)
    xi = x * a + y * b + z * c
    f, g = phi.substitute(xi), psi.substitute(xi)
    tail = f * ring.mul(a, ic) + g * ring.mul(b, ic)
    forward = PolyMap([x + f, y + g, z - tail])
    inverse = PolyMap([x - f, y - g, z + tail])
    d = _max_deg(_deg(phi), _deg(psi))
    return AutomorphismPair(Family.DIM3_FULL, forward, inverse, (_full((a, b, c), 3, ring),), d, d, d)


# four dimensions


def _dim4_factors(ring, A):
    """The three second factors of the pairwise conditions, in order."""
    m = ring.mul
    return (
        ring.sub(m(A[0][0], A[1][3]), m(A[0][3], A[1][0])),  # a11 a24 - a14 a21
        ring.sub(m(A[0][0], A[2][3]), m(A[0][3], A[2][0])),  # a11 a34 - a14 a31
        ring.sub(m(A[1][1], A[2][3]), m(A[1][3], A[2][1])),  # a22 a34 - a24 a32
    )


def dim4_conditions(A, ring: RingSpec = QQ) -> dict:
    """Evaluate every equality used by :func:`dim4_partial` (for diagnostics)."""
    m = ring.mul
    base = {
        "a12*a24 = a14*a22": ring.sub(m(A[0][1], A[1][3]), m(A[0][3], A[1][1])),
        "a13*a34 = a14*a33": ring.sub(m(A[0][2], A[2][3]), m(A[0][3], A[2][2])),
        "a23*a34 = a24*a33": ring.sub(m(A[1][2], A[2][3]), m(A[1][3], A[2][2])),
    }
    d1, d2, d3 = _dim4_factors(ring, A)
    base["a11*a24 = a14*a21"] = d1
    base["a11*a34 = a14*a31"] = d2
    base["a22*a34 = a24*a32"] = d3
    return base


_DIM4_PATTERN = {
    # which of (a11 a24 - a14 a21, a11 a34 - a14 a31, a22 a34 - a24 a32) vanish
    Dim4Case.ONE_INVARIANT: (False, False, False),
    Dim4Case.TWO_INVARIANT_A: (True, False, False),
    Dim4Case.TWO_INVARIANT_B: (True, True, False),
    Dim4Case.THREE_INVARIANT: (True, True, True),
}


def dim4_partial(A, f1: UniPoly, f2: UniPoly, f3: UniPoly, case,
                 ring: RingSpec | None = None) -> AutomorphismPair:
    """Four-dimensional family with one, two or three invariant forms.

    ``A`` is a 3x4 matrix; ``xi_i = sum_j A[i][j] x_j`` and
    ``u_i = x_i + f_i(xi_i)`` for i < 4, ``u_4 = x_4 - sum (a_ii/a_i4) f_i(xi_i)``.
    The inverse recovers ``xi_1``, then ``xi_2``, then ``xi_3`` from u,
    subtracting the correction terms accumulated so far.
    """
    ring = ring or f1.ring
    _same_ring(ring, f1, f2, f3)
    case = Dim4Case.parse(case)
    if len(A) != 3 or any(len(row) != 4 for row in A):
        raise ArityMismatch("A must be a 3x4 coefficient matrix")
    A = [_coerce_all(ring, row) for row in A]
    inv4 = [_unit_inverse(ring, A[i][3], f"a{i + 1}4", ConditionViolated) for i in range(3)]
    for name, g in (("f1", f1), ("f2", f2), ("f3", f3)):
        _check_generator(g, name)
    conds = dim4_conditions(A, ring)
    names = list(conds)
    for name in names[:3]:
        if conds[name] != 0:
            raise ConditionViolated(f"required equality {name} fails (difference {conds[name]})")
    for name, vanish in zip(names[3:], _DIM4_PATTERN[case]):
        holds = conds[name] == 0
        if vanish and not holds:
            raise ConditionViolated(f"case {case.value} needs {name} (difference {conds[name]})")
        if not vanish and holds:
            raise ConditionViolated(f"case {case.value} needs {name.replace('=', '!=')}")

    m = ring.mul
    ratio = [m(A[i][i], inv4[i]) for i in range(3)]          # a_ii / a_i4 = -b_i
    c21 = ring.sub(A[1][0], m(A[1][3], ratio[0]))            # a21 - a24 a11/a14
    c31 = ring.sub(A[2][0], m(A[2][3], ratio[0]))            # a31 - a34 a11/a14
    c32 = ring.sub(A[2][1], m(A[2][3], ratio[1]))            # a32 - a34 a22/a24

    X = Polynomial.variables(4, ring)
    forms = [Polynomial.linear_form(row, ring) for row in A]
    gens = (f1, f2, f3)
    fx = [g.substitute(L) for g, L in zip(gens, forms)]
    last = X[3]
    for i in range(3):
        last = last - fx[i] * ratio[i]
    forward = PolyMap([X[0] + fx[0], X[1] + fx[1], X[2] + fx[2], last])

    xi1 = forms[0]
    g1 = f1.substitute(xi1)
    xi2 = forms[1] - g1 * c21
    g2 = f2.substitute(xi2)
    xi3 = forms[2] - g1 * c31 - g2 * c32
    g3 = f3.substitute(xi3)
    inverse = PolyMap([X[0] - g1, X[1] - g2, X[2] - g3,
                       X[3] + g1 * ratio[0] + g2 * ratio[1] + g3 * ratio[2]])

    invariants = (
        InvariantForm(tuple(A[0]), Polynomial.zero(4, ring)),
        InvariantForm(tuple(A[1]), fx[0] * c21),
        InvariantForm(tuple(A[2]), fx[0] * c31 + fx[1] * c32),
    )
    d1, d2, d3 = (_deg(g) for g in gens)
    if case is Dim4Case.ONE_INVARIANT:
        predicted = _prod_deg(d1, d2, d3)
    elif case is Dim4Case.TWO_INVARIANT_A:
        predicted = _prod_deg(d3, _max_deg(d1, d2) if (d1 or d2) else None)
    elif case is Dim4Case.TWO_INVARIANT_B:
        predicted = _max_deg(d1, _prod_deg(d2, d3) if (d2 or d3) else None)
    else:
        predicted = _max_deg(d1, d2, d3)
    return AutomorphismPair(Family.DIM4_PARTIAL, forward, inverse, invariants,
                            _max_deg(d1, d2, d3), predicted, predicted, info={"case": case.value})


# n dimensions


def dimN_full(a, phis, ring: RingSpec | None = None) -> AutomorphismPair:
    """``u_i = x_i + phi_i(xi)`` (i < n), ``u_n = x_n - sum (a_i/a_n) phi_i(xi)``, ``xi = a.x``."""
    phis = list(phis)
    n = len(a)
    if n < 2:
        raise ArityMismatch("dimN_full needs n >= 2")
    if len(phis) != n - 1:
        raise ArityMismatch(f"need {n - 1} generators for n = {n}, got {len(phis)}")
    ring = ring or (phis[0].ring if phis else QQ)
    _same_ring(ring, *phis)
    a = _coerce_all(ring, a)
    ian = _unit_inverse(ring, a[-1], "a_n")
    for i, g in enumerate(phis, start=1):
        _check_generator(g, f"phi_{i}")
    X = Polynomial.variables(n, ring)
    xi = Polynomial.linear_form(a, ring)
    f = [g.substitute(xi) for g in phis]
    tail = Polynomial.zero(n, ring)
    for i in range(n - 1):
        tail = tail + f[i] * ring.mul(a[i], ian)
    forward = PolyMap([X[i] + f[i] for i in range(n - 1)] + [X[-1] - tail])
    inverse = PolyMap([X[i] - f[i] for i in range(n - 1)] + [X[-1] + tail])
    d = _max_deg(*(_deg(g) for g in phis))
    return AutomorphismPair(Family.DIMN_FULL, forward, inverse, (_full(a, n, ring),), d, d, d)


def triangular_param(lambdas, fs, ring: RingSpec | None = None) -> AutomorphismPair:
    """``u_i = lambda_i x_i + f_i(x_1..x_{i-1})``, inverted by back-substitution.

    ``fs`` holds n polynomials in n variables; ``fs[0]`` must be zero.
    """
    fs = list(fs)
    n = len(lambdas)
    if n < 1 or len(fs) != n:
        raise ArityMismatch(f"need one generator per variable, got {len(fs)} for {n} lambdas")
    ring = ring or fs[0].ring
    lambdas = _coerce_all(ring, lambdas)
    inv_l = [_unit_inverse(ring, v, f"lambda_{i + 1}", NonInvertibleLambda) for i, v in enumerate(lambdas)]
    for i, f in enumerate(fs):
        if f.nvars != n:
            raise ArityMismatch(f"f_{i + 1} is in {f.nvars} variables, expected {n}")
        if f.ring != ring:
            raise ConditionViolated(f"f_{i + 1} is over {f.ring}, lambdas over {ring}")
        late = sorted(j + 1 for j in f.variables_used() if j >= i)
        if late:
            raise TriangularityViolated(f"f_{i + 1} depends on x{late[0]}; only x1..x{i} allowed")
        if not f.is_zero() and f.lowest_degree() < 2:
            raise DegenerateGenerator(f"f_{i + 1} = {f} has constant or linear terms")
    X = Polynomial.variables(n, ring)
    forward = PolyMap([X[i] * lambdas[i] + fs[i] for i in range(n)])
    back = []
    for i in range(n):
        args = back + X[i:]
        back.append((X[i] - fs[i].compose(args)) * inv_l[i])
    inverse = PolyMap(back)
    jac = ring.one
    for v in lambdas:
        jac = ring.mul(jac, v)
    det = determinant(jacobian_matrix(forward))
    if det != Polynomial.constant(n, jac, ring):
        raise ConditionViolated(f"Jacobian {det} differs from the product of lambdas {jac}")
    degs = [_deg(f) for f in fs]
    return AutomorphismPair(Family.TRIANGULAR_PARAM, forward, inverse, (),
                            _max_deg(*degs), None, _prod_deg(*degs), jac)


# the four two-dimensional families obtained from cubic ansatz


def _potential_map(f: Polynomial, g: Polynomial) -> PolyMap:
    x, y = Polynomial.variables(2, f.ring)
    return PolyMap([x + f, y + g])


def worked_example_triangular(a, b, ring: RingSpec = QQ) -> list[PolyMap]:
    """``f = a y^2 + b y^3, g = 0`` and ``f = 0, g = a x^2 + b x^3``."""
    a, b = _coerce_all(ring, (a, b))
    x, y = Polynomial.variables(2, ring)
    zero = Polynomial.zero(2, ring)
    return [_potential_map(y ** 2 * a + y ** 3 * b, zero),
            _potential_map(zero, x ** 2 * a + x ** 3 * b)]


def _invariant_xi_parts(a, b, c, ring):
    a, b, c = _coerce_all(ring, (a, b, c))
    if b == 0 or c == 0:
        raise ConditionViolated("this family needs b != 0 and c != 0")
    ib = _unit_inverse(ring, b, "b")
    _unit_inverse(ring, c, "c")
    m = ring.mul
    k = m(m(3, c), ib)                                         # xi = x + (3c/b) y
    f = UniPoly([0, 0, a, ring.neg(m(m(b, b), ring.inverse(m(9, c))))], ring)
    g = UniPoly([0, 0, ring.neg(m(m(a, b), ring.inverse(m(3, c)))),
                 m(m(m(b, b), b), ring.inverse(m(27, m(c, c))))], ring)
    return k, f, g


def worked_example_invariant_xi(a, b, c, ring: RingSpec = QQ) -> PolyMap:
    """``f = a xi^2 - b^2/(9c) xi^3``, ``g = -ab/(3c) xi^2 + b^3/(27c^2) xi^3``, ``xi = x + 3c/b y``."""
    k, f, g = _invariant_xi_parts(a, b, c, ring)
    x, y = Polynomial.variables(2, ring)
    xi = x + y * k
    return _potential_map(f.substitute(xi), g.substitute(xi))


def worked_example_invariant_eta(a, b, ring: RingSpec = QQ) -> PolyMap:
    """``f = eta^2/a``, ``g = b eta^2/a^2``, ``eta = bx - ay``."""
    a, b = _coerce_all(ring, (a, b))
    if a == 0:
        raise ConditionViolated("this family needs a != 0")
    ia = _unit_inverse(ring, a, "a")
    x, y = Polynomial.variables(2, ring)
    eta = x * b - y * a
    sq = eta * eta
    return _potential_map(sq * ia, sq * ring.mul(b, ring.mul(ia, ia)))


def dim2_worked_examples(a, b, c, ring: RingSpec = QQ) -> list[PolyMap]:
    """The four normalized 2D families with cubic nonlinear parts (two triangular, two invariant)."""
    return worked_example_triangular(a, b, ring) + [
        worked_example_invariant_xi(a, b, c, ring),
        worked_example_invariant_eta(a, b, ring),
    ]


def worked_example_potentials(a, b, c, ring: RingSpec = QQ) -> list[Polynomial]:
    """Stream functions h with ``f = h_y``, ``g = -h_x`` for each worked example, in order."""
    a_, b_, c_ = _coerce_all(ring, (a, b, c))
    x, y = Polynomial.variables(2, ring)
    i3, i4 = ring.inverse(3), ring.inverse(4)
    h1 = y ** 3 * ring.mul(a_, i3) + y ** 4 * ring.mul(b_, i4)
    h2 = -(x ** 3 * ring.mul(a_, i3) + x ** 4 * ring.mul(b_, i4))
    k, f, _ = _invariant_xi_parts(a, b, c, ring)
    h3 = f.scale(ring.inverse(k)).antiderivative().substitute(x + y * k)
    ia = _unit_inverse(ring, a_, "a")
    eta = x * b_ - y * a_
    h4 = eta ** 3 * ring.neg(ring.mul(ring.mul(ia, ia), i3))
    return [h1, h2, h3, h4]


# FamilySpec documents


_COEFF_COUNT = {
    Family.DIM2_HOMOGENEOUS: 2,
    Family.DIM2_EXTRUDED: 2,
    Family.DIM3_PARTIAL: 6,
    Family.DIM3_FULL: 3,
    Family.DIM4_PARTIAL: 12,
}
_GEN_COUNT = {
    Family.DIM2_HOMOGENEOUS: 1,
    Family.DIM2_EXTRUDED: 2,
    Family.DIM3_PARTIAL: 2,
    Family.DIM3_FULL: 2,
    Family.DIM4_PARTIAL: 3,
}


@dataclass
class FamilySpec:
    """Parameters selecting one family member; round-trips through text."""

    family: Family
    ring: RingSpec
    coefficients: list
    generators: list
    case: Dim4Case | None = None

    def __post_init__(self):
        self.family = Family.parse(self.family) if isinstance(self.family, str) else self.family
        self.coefficients = _coerce_all(self.ring, self.coefficients)
        if self.case is not None:
            self.case = Dim4Case.parse(self.case)
        fam = self.family
        if fam in _COEFF_COUNT and len(self.coefficients) != _COEFF_COUNT[fam]:
            raise MalformedDocument(f"{fam.value} takes {_COEFF_COUNT[fam]} coefficients, "
                                    f"got {len(self.coefficients)}")
        if fam in _GEN_COUNT and len(self.generators) != _GEN_COUNT[fam]:
            raise MalformedDocument(f"{fam.value} takes {_GEN_COUNT[fam]} generators, "
                                    f"got {len(self.generators)}")
        if fam is Family.DIMN_FULL and len(self.generators) != len(self.coefficients) - 1:
            raise MalformedDocument("dimN_full takes n coefficients and n-1 generators")
        if fam is Family.TRIANGULAR_PARAM and len(self.generators) != len(self.coefficients):
            raise MalformedDocument("triangular_param takes n lambdas and n generators")
        if fam is Family.DIM4_PARTIAL and self.case is None:
            raise MalformedDocument("dim4_partial needs a 'case' line")

    @property
    def nvars(self) -> int:
        return {Family.DIM2_HOMOGENEOUS: 2, Family.DIM2_EXTRUDED: 3, Family.DIM3_PARTIAL: 3,
                Family.DIM3_FULL: 3, Family.DIM4_PARTIAL: 4}.get(self.family, len(self.coefficients))

    def build(self) -> AutomorphismPair:
        fam, cs, gs, ring = self.family, self.coefficients, self.generators, self.ring
        if fam is Family.DIM2_HOMOGENEOUS:
            return dim2_homogeneous(cs[0], cs[1], gs[0], ring)
        if fam is Family.DIM2_EXTRUDED:
            return dim2_extruded(cs[0], cs[1], gs[0], gs[1], ring)
        if fam is Family.DIM3_PARTIAL:
            return dim3_partial(*cs, gs[0], gs[1], ring)
        if fam is Family.DIM3_FULL:
            return dim3_full(*cs, gs[0], gs[1], ring)
        if fam is Family.DIM4_PARTIAL:
            return dim4_partial([cs[0:4], cs[4:8], cs[8:12]], *gs, self.case, ring)
        if fam is Family.DIMN_FULL:
            return dimN_full(cs, gs, ring)
        return triangular_param(cs, gs, ring)

    def to_text(self) -> str:
        lines = [f"family: {self.family.value}", f"ring: {self.ring}"]
        if self.family is Family.TRIANGULAR_PARAM:
            lines.append(f"vars: {len(self.coefficients)}")
        if self.case is not None:
            lines.append(f"case: {self.case.value}")
        lines.append("coefficients: " + " ".join(str(c) for c in self.coefficients))
        for g in self.generators:
            lines.append(f"generator: {g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> FamilySpec:
        from .parse import parse_polynomial

        fields: dict = {}
        gens = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise PolySyntaxError("expected 'key: value'", lineno, 1)
            key, value = key.strip(), value.strip()
            if key == "generator":
                gens.append((lineno, value))
            elif key in fields:
                raise PolySyntaxError(f"duplicate key {key!r}", lineno, 1)
            else:
                fields[key] = (lineno, value)
        for required in ("family", "ring", "coefficients"):
            if required not in fields:
                raise MalformedDocument(f"missing '{required}:' line")
        family = Family.parse(fields["family"][1])
        lineno, ring_text = fields["ring"]
        try:
            ring = RingSpec.parse(ring_text)
        except PolySyntaxError as exc:
            raise PolySyntaxError(exc.message, lineno, 1) from None
        lineno, coeff_text = fields["coefficients"]
        try:
            coeffs = [ring.coerce(tok) for tok in coeff_text.split()]
        except (ValueError, ZeroDivisionError, NotInvertible) as exc:
            raise PolySyntaxError(f"bad coefficient list: {exc}", lineno, 1) from None
        if family is Family.TRIANGULAR_PARAM:
            nvars = int(fields["vars"][1]) if "vars" in fields else len(coeffs)
            generators = [parse_polynomial(t, nvars, ring, ln) for ln, t in gens]
        else:
            generators = [UniPoly.from_polynomial(parse_polynomial(t, 1, ring, ln)) for ln, t in gens]
        case = fields["case"][1] if "case" in fields else None
        return cls(family, ring, coeffs, generators, case)
