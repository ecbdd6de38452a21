"""Jacobian matrices, symbolic determinants and principal-minor checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import ArityMismatch, MalformedNormalization, NotSquare, RingMismatch
from .poly import Polynomial
from .ring import RingSpec


class PolyMap:
    """An n-tuple of polynomials in n variables, ``P = (P_1, ..., P_n)``."""

    __slots__ = ("components",)

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ArityMismatch("a polynomial map needs at least one component")
        n = len(components)
        ring = components[0].ring
        for c in components:
            if c.nvars != n:
                raise ArityMismatch(f"component in {c.nvars} variables, map has {n} components")
            if c.ring != ring:
                raise RingMismatch("components live in different rings")
        self.components = components

    @classmethod
    def identity(cls, n: int, ring: RingSpec) -> PolyMap:
        return cls(Polynomial.variables(n, ring))

    @property
    def nvars(self) -> int:
        return len(self.components)

    @property
    def ring(self) -> RingSpec:
        return self.components[0].ring

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "PolyMap([" + ", ".join(str(c) for c in self.components) + "])"

    def degree(self):
        return max(c.total_degree() for c in self.components)

    def compose(self, inner: PolyMap, truncate: int | None = None) -> PolyMap:
        """``self ∘ inner``: substitute ``inner`` into every component."""
        if inner.nvars != self.nvars:
            raise ArityMismatch(f"cannot compose {self.nvars}-map with {inner.nvars}-map")
        return PolyMap(c.compose(inner.components, truncate) for c in self.components)

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.components]

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.nvars, self.ring)

    def __sub__(self, other: PolyMap) -> PolyMap:
        return PolyMap(a - b for a, b in zip(self.components, other.components))


class PolyMatrix:
    """Dense row-major matrix of polynomials sharing ring and arity."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ArityMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        if entries:
            ring, nvars = entries[0].ring, entries[0].nvars
            for e in entries:
                if e.ring != ring:
                    raise RingMismatch("matrix entries live in different rings")
                if e.nvars != nvars:
                    raise ArityMismatch("matrix entries disagree on the number of variables")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows) -> PolyMatrix:
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, [e for r in rows for e in r])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, rows, cols) -> PolyMatrix:
        return PolyMatrix(len(rows), len(cols), [self[i, j] for i in rows for j in cols])

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __repr__(self):
        return "PolyMatrix(" + repr([[str(e) for e in r] for r in self.to_rows()]) + ")"


def jacobian_matrix(P: PolyMap) -> PolyMatrix:
    n = P.nvars
    return PolyMatrix(n, n, [c.partial(j) for c in P.components for j in range(n)])


def _det(M: PolyMatrix, rows: tuple, cols: tuple, memo: dict) -> Polynomial:
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        out = M[rows[0], cols[0]]
    else:
        # sparsest row: fewest stored terms among the live columns
        pivot = min(rows, key=lambda r: sum(len(M[r, c]) for c in cols))
        rest = tuple(r for r in rows if r != pivot)
        sign_base = rows.index(pivot)
        out = None
        for pos, c in enumerate(cols):
            entry = M[pivot, c]
            if entry.is_zero():
                continue
            minor = _det(M, rest, cols[:pos] + cols[pos + 1:], memo)
            if minor.is_zero():
                continue
            term = entry * minor
            if (sign_base + pos) % 2:
                term = -term
            out = term if out is None else out + term
        if out is None:
            sample = M.entries[0]
            out = Polynomial.zero(sample.nvars, sample.ring)
    memo[key] = out
    return out


def determinant(M: PolyMatrix) -> Polynomial:
    """Exact determinant by cofactor expansion along the sparsest row.

    Minors are memoised on their (row set, column set), so no minor is
    expanded twice; no division is ever performed.
    """
    if M.rows != M.cols:
        raise NotSquare(f"{M.rows}x{M.cols} matrix has no determinant")
    if M.rows == 0:
        raise NotSquare("empty matrix")
    idx = tuple(range(M.rows))
    return _det(M, idx, idx, {})


def principal_minor(M: PolyMatrix, indices) -> Polynomial:
    indices = tuple(indices)
    return determinant(M.submatrix(indices, indices))


def principal_minor_sums(F: PolyMatrix) -> list[Polynomial]:
    """``[E_1, ..., E_n]`` where ``E_k`` sums all k-by-k principal minors."""
    if F.rows != F.cols:
        raise NotSquare(f"{F.rows}x{F.cols} matrix has no principal minors")
    n = F.rows
    memo: dict = {}
    idx = tuple(range(n))
    sums = []
    for k in range(1, n + 1):
        acc = None
        for S in combinations(idx, k):
            d = _det(F, S, S, memo)
            acc = d if acc is None else acc + d
        sums.append(acc)
    return sums


@dataclass
class MinorEquation:
    """One equation ``det(J[T,T]) = prod_{j in T} lambda_j`` of the parametrized system."""

    retained: tuple
    deleted: tuple
    residual: Polynomial

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()


@dataclass
class VerifyReport:
    jacobian_is_constant: bool
    constant_value: object
    determinant: Polynomial
    minor_sums: list = field(default_factory=list)
    minor_equations: list = field(default_factory=list)

    @property
    def failed_minor_equations(self) -> list:
        return [eq for eq in self.minor_equations if not eq.holds]

    @property
    def is_keller(self) -> bool:
        return self.jacobian_is_constant and self.constant_value != 0

    @property
    def ok(self) -> bool:
        return self.is_keller and not self.failed_minor_equations

    def to_text(self) -> str:
        lines = [
            f"jacobian_is_constant: {'true' if self.jacobian_is_constant else 'false'}",
            f"jacobian_constant: {self.constant_value if self.jacobian_is_constant else 'none'}",
            f"jacobian_determinant: {self.determinant}",
        ]
        for k, e in enumerate(self.minor_sums, start=1):
            lines.append(f"E{k}: {e}")
        lines.append(f"minor_equations: {len(self.minor_equations)}")
        failed = self.failed_minor_equations
        lines.append(f"failed_minor_equations: {len(failed)}")
        for eq in failed:
            kept = ",".join(str(i + 1) for i in eq.retained)
            gone = ",".join(str(i + 1) for i in eq.deleted)
            lines.append(f"failed: deleted={{{gone}}} retained={{{kept}}} residual={eq.residual}")
        return "\n".join(lines) + "\n"


def _diagonal_linear_part(P: PolyMap):
    """``[lambda_i]`` if every component is ``lambda_i x_i + (degree >= 2)``, else None."""
    lambdas = []
    for i, c in enumerate(P.components):
        if c.constant_term() != 0:
            return None
        lin = c.linear_coefficients()
        if any(v != 0 for j, v in enumerate(lin) if j != i):
            return None
        lambdas.append(lin[i])
    return lambdas


def check_keller(P: PolyMap) -> VerifyReport:
    """Determinant of DP, whether it is constant, and the E_k of the nonlinear part.

    The minor sums are filled in only when P splits as ``lambda_i x_i + f_i``
    with every ``f_i`` free of constant and linear terms.
    """
    det = determinant(jacobian_matrix(P))
    constant = det.total_degree() <= 0
    value = det.constant_term() if constant else None
    sums = []
    if _diagonal_linear_part(P) is not None:
        F = jacobian_matrix(PolyMap(c.nonlinear_part() for c in P.components))
        sums = principal_minor_sums(F)
    return VerifyReport(constant, value, det, sums)


def check_parametrized_minors(P: PolyMap, lambdas) -> VerifyReport:
    """Check all 2^n - 1 principal-minor equations of ``det(diag(lambda) + F) = prod lambda``.

    Equations are ordered by increasing size of the retained index set,
    so the 1x1 conditions ``f_ii = 0`` come first and the full determinant last.
    """
    n = P.nvars
    ring = P.ring
    if len(lambdas) != n:
        raise ArityMismatch(f"{len(lambdas)} lambdas for a map in {n} variables")
    lambdas = [ring.coerce(v) for v in lambdas]
    for i, c in enumerate(P.components):
        f = c - Polynomial.variable(n, i, ring) * lambdas[i]
        if f.lowest_degree() < 2:
            raise MalformedNormalization(
                f"component {i + 1} minus {lambdas[i]}*x{i + 1} still has constant or linear terms: {f}")
    J = jacobian_matrix(P)
    memo: dict = {}
    idx = tuple(range(n))
    equations = []
    for k in range(1, n + 1):
        for T in combinations(idx, k):
            prod = ring.one
            for j in T:
                prod = ring.mul(prod, lambdas[j])
            residual = _det(J, T, T, memo) - prod
            deleted = tuple(j for j in idx if j not in T)
            equations.append(MinorEquation(T, deleted, residual))
    det = _det(J, idx, idx, memo)
    constant = det.total_degree() <= 0
    F = jacobian_matrix(PolyMap(c.nonlinear_part() for c in P.components))
    return VerifyReport(constant, det.constant_term() if constant else None, det,
                        principal_minor_sums(F), equations)


def check_monge_ampere(h: Polynomial) -> Polynomial:
    """Residual ``h_xx h_yy - h_xy^2``; zero iff h solves the homogeneous Monge-Ampere equation."""
    if h.nvars != 2:
        raise ArityMismatch("the Monge-Ampere residual is defined for two variables")
    hx, hy = h.partial(0), h.partial(1)
    return hx.partial(0) * hy.partial(1) - hx.partial(1) * hx.partial(1)


def potential_to_map(h: Polynomial) -> PolyMap:
    """``(x + h_y, y - h_x)``: the map whose nonlinear part has stream function h."""
    if h.nvars != 2:
        raise ArityMismatch("a scalar potential must be a polynomial in two variables")
    x, y = Polynomial.variables(2, h.ring)
    return PolyMap([x + h.partial(1), y - h.partial(0)])


def divergence(P: PolyMap) -> Polynomial:
    """Trace of the Jacobian of the nonlinear part (``E_1``)."""
    acc = Polynomial.zero(P.nvars, P.ring)
    for i, c in enumerate(P.components):
        acc = acc + c.nonlinear_part().partial(i)
    return acc
