"""Random valid family specifications, for tests and the ``report`` command.

Coefficients are drawn from [-9, 9], generator degrees from [2, 5] and
dimensions from [2, 6].  Exact composition of a degree-d map with a
degree-e inverse in n variables touches up to ``C(d*e + n, n)`` monomials,
so samples whose estimate exceeds ``budget`` are redrawn; this keeps a
few hundred instances per family within desk-scale runtimes while the
parameter ranges themselves stay untouched.  Where the dimension is free
(``dimN_full``, ``triangular_param``) it is drawn first and only the
generators are redrawn, so every n in [2, 6] keeps its share.
Triangular generators are sparse, so they are limited by the degree of
the back-substituted inverse instead of the dense estimate.
"""

from __future__ import annotations

import math
import random
from math import comb

from .errors import ConditionViolated, PolyAutoError
from .families import Dim4Case, Family, FamilySpec
from .poly import Polynomial, UniPoly
from .ring import QQ, RingSpec

COEFF = 9
MAX_GEN_DEGREE = 5
MAX_N = 6
DEFAULT_BUDGET = 3000
TRIANGULAR_DEGREE_CAP = 40


def _nz(rng):
    v = 0
    while v == 0:
        v = rng.randint(-COEFF, COEFF)
    return v


def _coeff(rng):
    return rng.randint(-COEFF, COEFF)


def random_unipoly(rng, degree, low=2, ring=QQ):
    """Degree ``degree`` generator with powers ``>= low`` (zero when degree < low)."""
    if degree < low:
        return UniPoly([], ring)
    coeffs = [0] * low + [_coeff(rng) for _ in range(degree - low)] + [_nz(rng)]
    return UniPoly(coeffs, ring)


def _gen_degree(rng, allow_zero=True):
    # a zero generator now and then exercises the "skip the factor" rules
    if allow_zero and rng.random() < 0.08:
        return 0
    return rng.randint(2, MAX_GEN_DEGREE)


def _dim2_homogeneous(rng, ring, fits=None):
    a, b = 0, 0
    while a == 0 and b == 0:
        a, b = _coeff(rng), _coeff(rng)
    sigma = random_unipoly(rng, rng.randint(3, MAX_GEN_DEGREE), low=3, ring=ring)
    return FamilySpec(Family.DIM2_HOMOGENEOUS, ring, [a, b], [sigma])


def _dim2_extruded(rng, ring, fits=None):
    a, b = 0, 0
    while a == 0 and b == 0:
        a, b = _coeff(rng), _coeff(rng)
    sigma = random_unipoly(rng, rng.randint(3, MAX_GEN_DEGREE), low=3, ring=ring)
    zeta = random_unipoly(rng, rng.randint(0, 3), low=0, ring=ring)
    return FamilySpec(Family.DIM2_EXTRUDED, ring, [a, b], [sigma, zeta])


def _dim3_partial(rng, ring, fits=None):
    while True:
        c, r = _nz(rng), _nz(rng)
        eta_case = rng.random() < 0.5
        # eta invariant: a r = c p, b r != c q;  xi invariant: b r = c q, a r != c p
        y = _coeff(rng)
        if (y * r) % c:
            continue
        x = y * r // c
        if abs(x) > COEFF:
            continue
        free1, free2 = _coeff(rng), _coeff(rng)
        if eta_case:
            a, p, b, q = y, x, free1, free2
            if b * r == c * q:
                continue
        else:
            b, q, a, p = y, x, free1, free2
            if a * r == c * p:
                continue
        phi = random_unipoly(rng, _gen_degree(rng), ring=ring)
        psi = random_unipoly(rng, _gen_degree(rng), ring=ring)
        return FamilySpec(Family.DIM3_PARTIAL, ring, [a, b, c, p, q, r], [phi, psi])


def _dim3_full(rng, ring, fits=None):
    a, b, c = _coeff(rng), _coeff(rng), _nz(rng)
    return FamilySpec(Family.DIM3_FULL, ring, [a, b, c],
                      [random_unipoly(rng, _gen_degree(rng), ring=ring) for _ in range(2)])


def _dim4_matrix(rng, case: Dim4Case):
    """Integer 3x4 matrix in [-9, 9] satisfying the equalities of ``case`` (rejection sampling)."""
    vanish = {
        Dim4Case.ONE_INVARIANT: (False, False, False),
        Dim4Case.TWO_INVARIANT_A: (True, False, False),
        Dim4Case.TWO_INVARIANT_B: (True, True, False),
        Dim4Case.THREE_INVARIANT: (True, True, True),
    }[case]

    def solve(known, scale, den):
        # unknown t with t * den = known * scale; None when not an in-range integer
        if (known * scale) % den:
            return None
        t = known * scale // den
        return t if abs(t) <= COEFF else None

    for _ in range(10000):
        a14, a24, a34 = _nz(rng), _nz(rng), _nz(rng)
        a11, a22, a33 = _coeff(rng), _coeff(rng), _coeff(rng)
        # a12 a24 = a14 a22, a13 a34 = a14 a33, a23 a34 = a24 a33
        a12 = solve(a14, a22, a24)
        a13 = solve(a14, a33, a34)
        a23 = solve(a24, a33, a34)
        if None in (a12, a13, a23):
            continue
        a21 = solve(a11, a24, a14) if vanish[0] else _coeff(rng)
        a31 = solve(a11, a34, a14) if vanish[1] else _coeff(rng)
        a32 = solve(a22, a34, a24) if vanish[2] else _coeff(rng)
        if None in (a21, a31, a32):
            continue
        if not vanish[0] and a11 * a24 == a14 * a21:
            continue
        if not vanish[1] and a11 * a34 == a14 * a31:
            continue
        if not vanish[2] and a22 * a34 == a24 * a32:
            continue
        return [[a11, a12, a13, a14], [a21, a22, a23, a24], [a31, a32, a33, a34]]
    raise ConditionViolated(f"could not sample a matrix for {case.value}")


def _dim4_partial(rng, ring, fits=None, case=None):
    case = Dim4Case.parse(case) if case is not None else rng.choice(list(Dim4Case))
    A = _dim4_matrix(rng, case)
    gens = [random_unipoly(rng, _gen_degree(rng), ring=ring) for _ in range(3)]
    return FamilySpec(Family.DIM4_PARTIAL, ring, [v for row in A for v in row], gens, case)


def _dimN_full(rng, ring, fits=None):
    n = rng.randint(2, MAX_N)
    while True:
        a = [_coeff(rng) for _ in range(n - 1)] + [_nz(rng)]
        spec = FamilySpec(Family.DIMN_FULL, ring, a,
                          [random_unipoly(rng, _gen_degree(rng), ring=ring) for _ in range(n - 1)])
        if fits is None or fits(spec):
            return spec


def random_triangular_generator(rng, n, i, max_degree=MAX_GEN_DEGREE, ring=QQ, max_terms=3):
    """Polynomial in x_1..x_i (0-based count ``i``) with terms of degree 2..max_degree."""
    if i == 0 or rng.random() < 0.08:
        return Polynomial.zero(n, ring)
    degree = rng.randint(2, max_degree)
    terms = {}
    for k in range(rng.randint(1, max_terms)):
        d = degree if k == 0 else rng.randint(2, degree)
        exps = [0] * n
        for _ in range(d):
            exps[rng.randrange(i)] += 1
        terms[tuple(exps)] = _nz(rng)
    return Polynomial(n, ring, terms)


def _triangular(rng, ring, fits=None):
    n = rng.randint(2, MAX_N)
    while True:
        lambdas = [_nz(rng) for _ in range(n)]
        fs = [random_triangular_generator(rng, n, i, ring=ring) for i in range(n)]
        spec = FamilySpec(Family.TRIANGULAR_PARAM, ring, lambdas, fs)
        if fits is None or fits(spec):
            return spec


def triangular_degrees(fs) -> list:
    """Degree of each back-substituted inverse component, by propagation.

    ``x_i = (u_i - f_i(x_1..x_{i-1})) / lambda_i`` has degree at most
    ``max(1, max over terms of sum e_j * D_j)``; with generic coefficients
    this is attained.
    """
    D = []
    for f in fs:
        d = 1
        for exps in f.terms:
            d = max(d, sum(e * dj for e, dj in zip(exps, D)))
        D.append(d)
    return D


SAMPLERS = {
    Family.DIM2_HOMOGENEOUS: _dim2_homogeneous,
    Family.DIM2_EXTRUDED: _dim2_extruded,
    Family.DIM3_PARTIAL: _dim3_partial,
    Family.DIM3_FULL: _dim3_full,
    Family.DIM4_PARTIAL: _dim4_partial,
    Family.DIMN_FULL: _dimN_full,
    Family.TRIANGULAR_PARAM: _triangular,
}


def _gen_degrees(spec):
    out = []
    for g in spec.generators:
        d = g.degree() if isinstance(g, UniPoly) else g.total_degree()
        out.append(d if d >= 0 else None)
    return out


def estimated_cost(spec: FamilySpec) -> int:
    """Dense monomial-count estimate ``C(d_fwd * d_inv + n, n)`` from generator degrees."""
    degs = _gen_degrees(spec)
    live = [d for d in degs if d]
    fam = spec.family
    if fam is Family.DIM2_HOMOGENEOUS:
        d_fwd = d_inv = max(1, (degs[0] or 1) - 1)
    elif fam is Family.DIM2_EXTRUDED:
        d_fwd = d_inv = max(1, (degs[0] or 1) - 1 + (degs[1] or 0))
    elif fam is Family.DIM3_PARTIAL or (fam is Family.DIM4_PARTIAL and spec.case is Dim4Case.ONE_INVARIANT):
        d_fwd, d_inv = max(live, default=1), math.prod(live)
    elif fam is Family.DIM4_PARTIAL and spec.case is Dim4Case.TWO_INVARIANT_A:
        d_fwd = max(live, default=1)
        d_inv = (degs[2] or 1) * max([d for d in degs[:2] if d], default=1)
    elif fam is Family.DIM4_PARTIAL and spec.case is Dim4Case.TWO_INVARIANT_B:
        d_fwd = max(live, default=1)
        d_inv = max(degs[0] or 1, math.prod(d for d in degs[1:] if d))
    elif fam is Family.TRIANGULAR_PARAM:
        d_fwd, d_inv = max(live, default=1), max(triangular_degrees(spec.generators))
    else:
        d_fwd = d_inv = max(live, default=1)
    return comb(d_fwd * d_inv + spec.nvars, spec.nvars)


def fits_budget(spec: FamilySpec, budget: int) -> bool:
    if spec.family is Family.TRIANGULAR_PARAM:
        # sparse generators: the dense monomial count wildly overstates the work
        return max(triangular_degrees(spec.generators)) <= TRIANGULAR_DEGREE_CAP
    return estimated_cost(spec) <= budget


def random_spec(family, rng: random.Random, ring: RingSpec = QQ, budget: int | None = DEFAULT_BUDGET):
    """One valid :class:`FamilySpec` of ``family`` and its built pair."""
    family = Family.parse(family) if isinstance(family, str) else family
    fits = None if budget is None else (lambda sp: fits_budget(sp, budget))
    while True:
        spec = SAMPLERS[family](rng, ring, fits)
        if fits is not None and not fits(spec):
            continue
        try:
            return spec, spec.build()
        except PolyAutoError:
            continue


def corpus(per_family: int = 200, seed: int = 0, families=None, budget: int | None = DEFAULT_BUDGET):
    """``[(spec, pair), ...]`` with ``per_family`` entries for each family, deterministic in ``seed``."""
    out = []
    for family in families or list(Family):
        family = Family.parse(family) if isinstance(family, str) else family
        rng = random.Random(f"{seed}:{family.value}")
        out.extend(random_spec(family, rng, budget=budget) for _ in range(per_family))
    return out
