"""Formal inverse of a polynomial map by truncated fixed-point iteration.

This module knows nothing about the constructive families; it is the
independent check on their closed-form inverses and degree formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import ArityMismatch, NonInvertibleLinearPart, NonzeroConstantPart, NotInvertible
from .jacobian import PolyMap
from .poly import Polynomial
from .ring import RingSpec


@dataclass(frozen=True)
class TruncatedMap:
    """Components of a formal inverse, exact up to ``truncation_degree``."""

    components: tuple
    truncation_degree: int

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def ring(self) -> RingSpec:
        return self.components[0].ring

    def as_map(self) -> PolyMap:
        return PolyMap(self.components)


@dataclass(frozen=True)
class NotPolynomialUpTo:
    """No polynomial inverse of degree below ``dmax`` was found."""

    dmax: int

    def __str__(self):
        return f"NotPolynomialUpTo({self.dmax})"


def _det(rows, ring, idx_rows, idx_cols, memo):
    key = (idx_rows, idx_cols)
    if key in memo:
        return memo[key]
    if len(idx_rows) == 1:
        val = rows[idx_rows[0]][idx_cols[0]]
    else:
        r0, rest = idx_rows[0], idx_rows[1:]
        val = ring.zero
        for pos, c in enumerate(idx_cols):
            a = rows[r0][c]
            if a == 0:
                continue
            minor = _det(rows, ring, rest, idx_cols[:pos] + idx_cols[pos + 1:], memo)
            term = ring.mul(a, minor)
            val = ring.sub(val, term) if pos % 2 else ring.add(val, term)
    memo[key] = val
    return val


def matrix_inverse(rows, ring: RingSpec):
    """Inverse of a square ring matrix via adjugate / determinant."""
    n = len(rows)
    idx = tuple(range(n))
    memo: dict = {}
    det = _det(rows, ring, idx, idx, memo)
    try:
        inv_det = ring.inverse(det)
    except NotInvertible:
        raise NonInvertibleLinearPart(f"linear part has determinant {det}, not a unit in {ring}") from None
    if n == 1:
        return [[inv_det]]
    out = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # adj[j][i] = (-1)^(i+j) * minor(i, j)
            r = tuple(k for k in idx if k != i)
            c = tuple(k for k in idx if k != j)
            cof = _det(rows, ring, r, c, memo)
            if (i + j) % 2:
                cof = ring.neg(cof)
            out[j][i] = ring.mul(cof, inv_det)
    return out


def linear_part(P: PolyMap):
    return [c.linear_coefficients() for c in P.components]


def _apply_matrix(M, vecs, ring, n):
    out = []
    for row in M:
        acc = Polynomial.zero(n, ring)
        for a, v in zip(row, vecs):
            if a != 0:
                acc = acc + v * a
        out.append(acc)
    return out


def _iterate(P: PolyMap):
    """Yield ``(D, components)`` with components exact through degree D, for D = 1, 2, ..."""
    n, ring = P.nvars, P.ring
    for i, c in enumerate(P.components):
        if c.constant_term() != 0:
            raise NonzeroConstantPart(f"component {i + 1} has constant term {c.constant_term()}")
    Linv = matrix_inverse(linear_part(P), ring)
    H = [c.nonlinear_part() for c in P.components]
    U = Polynomial.variables(n, ring)
    x = _apply_matrix(Linv, U, ring, n)
    D = 1
    yield D, x
    if all(h.is_zero() for h in H):
        # linear map: the inverse is exact already; keep yielding it
        while True:
            D += 1
            yield D, x
    while True:
        D += 1
        hx = [h.compose(x, truncate=D) for h in H]
        x = _apply_matrix(Linv, [u - v for u, v in zip(U, hx)], ring, n)
        yield D, x


def formal_inverse(P: PolyMap, D: int) -> TruncatedMap:
    """Formal inverse of P truncated at total degree D.

    Starts from ``x = L^-1 u`` and applies ``x <- L^-1 (u - H(x))`` with the
    truncation raised by one degree per step; each step fixes one more
    homogeneous degree, so D - 1 steps give the exact D-truncation.
    """
    if D < 1:
        raise ValueError("truncation degree must be >= 1")
    for d, x in _iterate(P):
        if d == D:
            return TruncatedMap(tuple(x), D)


def is_exact_inverse(P: PolyMap, Q: PolyMap):
    """``(ok, residual)`` where residual is ``Q∘P - id`` and ok needs both orders to be identity."""
    if P.nvars != Q.nvars:
        raise ArityMismatch(f"{P.nvars}-map vs {Q.nvars}-map")
    identity = PolyMap.identity(P.nvars, P.ring)
    residual = Q.compose(P) - identity
    if any(not c.is_zero() for c in residual):
        return False, residual
    other = P.compose(Q) - identity
    return all(c.is_zero() for c in other), residual


def default_dmax(P: PolyMap) -> int:
    """One beyond the ``deg(P)^(n-1)`` bound for automorphisms."""
    return max(1, P.degree()) ** (P.nvars - 1) + 1


def measure_inverse_degree(P: PolyMap, dmax: int | None = None):
    """Exact degree of the polynomial inverse, or :class:`NotPolynomialUpTo`.

    The series is grown one degree at a time; whenever the next
    homogeneous part vanishes, the current truncation is tested as an
    exact two-sided inverse.
    """
    result = exact_inverse(P, dmax)
    if isinstance(result, NotPolynomialUpTo):
        return result
    return result.degree()


def exact_inverse(P: PolyMap, dmax: int | None = None):
    """Polynomial inverse of P found by the oracle, or :class:`NotPolynomialUpTo`."""
    if dmax is None:
        dmax = default_dmax(P)
    gen = _iterate(P)
    _, current = next(gen)
    for D, nxt in gen:
        if all(c.homogeneous_part(D).is_zero() for c in nxt):
            Q = PolyMap(current)
            if is_exact_inverse(P, Q)[0]:
                return Q
        if D - 1 >= dmax:
            return NotPolynomialUpTo(dmax)
        current = nxt


def inverse_oracle_stabilizes(P: PolyMap, D: int) -> bool:
    """True when the D and D+1 truncations coincide."""
    low = formal_inverse(P, D + 1)
    return all(c.homogeneous_part(D + 1).is_zero() for c in low.components)


def series_profile(P: PolyMap, dmax: int | None = None) -> list:
    """``[(D, terms of degree D in the inverse series), ...]`` for D = 1..dmax.

    Stops early, after the first empty degree, once the truncation is an
    exact inverse; a polynomial inverse shows up as a profile that drops
    to zero and stays there.
    """
    if dmax is None:
        dmax = default_dmax(P)
    out = []
    gen = _iterate(P)
    D, current = next(gen)
    out.append((D, sum(len(c.homogeneous_part(D)) for c in current)))
    for D, nxt in gen:
        count = sum(len(c.homogeneous_part(D)) for c in nxt)
        out.append((D, count))
        if count == 0 and is_exact_inverse(P, PolyMap(current))[0]:
            break
        if D >= dmax:
            break
        current = nxt
    return out


def _solve_for(c: Polynomial, i: int, done: set):
    """``(lam, g)`` if ``c = lam*x_i + g`` with g free of x_i and lam a unit constant, else None."""
    if not c.variables_used() <= done | {i}:
        return None
    n = c.nvars
    lam = None
    rest = {}
    for exps, coef in c.terms.items():
        if exps[i] == 0:
            rest[exps] = coef
        elif exps[i] == 1 and sum(exps) == 1:
            lam = coef
        else:
            return None
    if lam is None or not c.ring.is_unit(lam):
        return None
    return lam, Polynomial(n, c.ring, rest)


def back_substitution_inverse(P: PolyMap):
    """Exact inverse of a triangular map (in some variable order), or None.

    A component qualifies once it reads ``lam*x_i + g`` with ``lam`` a
    unit and g depending only on already solved variables; then
    ``x_i = (u_i - g(x)) / lam``.
    """
    n, ring = P.nvars, P.ring
    U = Polynomial.variables(n, ring)
    solved: dict = {}
    pending = set(range(n))
    while pending:
        for k in sorted(pending):
            for i in range(n):
                if i in solved:
                    continue
                hit = _solve_for(P.components[k], i, set(solved))
                if hit is None:
                    continue
                lam, g = hit
                args = [solved.get(j, U[j]) for j in range(n)]
                # component k carries variable i; its image coordinate is u_k
                solved[i] = (U[k] - g.compose(args)) * ring.inverse(lam)
                pending.discard(k)
                break
            else:
                continue
            break
        else:
            return None
    return PolyMap(solved[i] for i in range(n))
