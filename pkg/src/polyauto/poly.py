"""Sparse multivariate polynomials over a pluggable coefficient ring.

Monomials are stored as packed integer keys: each exponent occupies a
32-bit field (first variable in the most significant field) and the
total degree occupies one more field on top.  Adding two keys therefore
multiplies the monomials, and ordinary integer order on keys *is*
graded-lexicographic order, so the canonical printer just sorts keys.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction

from gmpy2 import mpq

from .errors import ArityMismatch, ExponentOverflow, IndexOutOfRange, RingMismatch
from .ring import QQ, RingSpec

FIELD_BITS = 32
FIELD_MASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = FIELD_MASK

#: Degree reported for the zero polynomial.
NEG_INF = -math.inf

_SCALAR_TYPES = (int, Fraction, mpq)


def pack(exponents) -> int:
    """Pack an exponent vector into a graded key."""
    key = 0
    total = 0
    for e in exponents:
        e = int(e)
        if e < 0:
            raise ValueError(f"negative exponent {e}")
        if e > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent {e} exceeds {MAX_EXPONENT}")
        total += e
        key = (key << FIELD_BITS) | e
    if total > MAX_EXPONENT:
        raise ExponentOverflow(f"total degree {total} exceeds {MAX_EXPONENT}")
    return (total << (FIELD_BITS * len(exponents))) | key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & FIELD_MASK
        key >>= FIELD_BITS
    return tuple(out)


def _add_into(acc: dict, other: dict, sign=1):
    get = acc.get
    if sign == 1:
        for k, c in other.items():
            acc[k] = get(k, 0) + c
    else:
        for k, c in other.items():
            acc[k] = get(k, 0) - c


def _clean(terms: dict, modulus):
    if modulus is None:
        return {k: c for k, c in terms.items() if c != 0}
    out = {}
    for k, c in terms.items():
        c %= modulus
        if c:
            out[k] = c
    return out


def _mul_terms(a: dict, b: dict, modulus, bound=None) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    if len(b) == 1:
        ((kb, cb),) = b.items()
        for ka, ca in a.items():
            k = ka + kb
            if bound is None or k < bound:
                out[k] = ca * cb
    elif bound is None:
        bitems = list(b.items())
        for ka, ca in a.items():
            for kb, cb in bitems:
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    else:
        bitems = sorted(b.items())
        for ka, ca in a.items():
            if ka >= bound:
                continue
            for kb, cb in bitems:
                k = ka + kb
                if k >= bound:
                    break
                out[k] = get(k, 0) + ca * cb
    return _clean(out, modulus)


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables ``x1..xn``."""

    __slots__ = ("nvars", "ring", "_terms", "_hash")

    def __init__(self, nvars: int, ring: RingSpec = QQ, terms=None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        self.ring = ring
        self._hash = None
        acc: dict = {}
        for exps, c in (terms or {}).items():
            if isinstance(exps, int) and nvars == 1:
                exps = (exps,)
            if len(exps) != nvars:
                raise ArityMismatch(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
            k = pack(exps)
            acc[k] = acc.get(k, ring.zero) + ring.coerce(c)
        self._terms = _clean(acc, ring.modulus)

    @classmethod
    def _raw(cls, nvars, ring, terms) -> Polynomial:
        p = object.__new__(cls)
        p.nvars = nvars
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, nvars: int, ring: RingSpec = QQ) -> Polynomial:
        return cls._raw(nvars, ring, {})

    @classmethod
    def constant(cls, nvars: int, value, ring: RingSpec = QQ) -> Polynomial:
        c = ring.coerce(value)
        return cls._raw(nvars, ring, {0: c} if c != 0 else {})

    @classmethod
    def variable(cls, nvars: int, index: int, ring: RingSpec = QQ) -> Polynomial:
        if not 0 <= index < nvars:
            raise IndexOutOfRange(f"variable index {index} out of range for {nvars} variables")
        exps = [0] * nvars
        exps[index] = 1
        return cls._raw(nvars, ring, {pack(exps): ring.one})

    @classmethod
    def variables(cls, nvars: int, ring: RingSpec = QQ) -> list[Polynomial]:
        return [cls.variable(nvars, i, ring) for i in range(nvars)]

    @classmethod
    def linear_form(cls, coefficients, ring: RingSpec = QQ) -> Polynomial:
        n = len(coefficients)
        out = cls.zero(n, ring)
        for i, c in enumerate(coefficients):
            out = out + cls.variable(n, i, ring) * c
        return out

    # inspection

    @property
    def terms(self) -> dict:
        """Exponent-tuple -> coefficient map in graded-lex descending order."""
        return {unpack(k, self.nvars): self._terms[k] for k in sorted(self._terms, reverse=True)}

    def items(self):
        return list(self.terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._terms)

    def total_degree(self):
        if not self._terms:
            return NEG_INF
        return max(self._terms) >> (FIELD_BITS * self.nvars)

    def lowest_degree(self):
        """Smallest total degree of a stored term (``inf`` for zero)."""
        if not self._terms:
            return math.inf
        return min(self._terms) >> (FIELD_BITS * self.nvars)

    def coefficient(self, exponents):
        return self._terms.get(pack(exponents), self.ring.zero)

    def constant_term(self):
        return self._terms.get(0, self.ring.zero)

    def linear_coefficients(self) -> list:
        """Coefficients of x1..xn in the degree-one part."""
        out = []
        for i in range(self.nvars):
            exps = [0] * self.nvars
            exps[i] = 1
            out.append(self.coefficient(exps))
        return out

    def homogeneous_part(self, degree: int) -> Polynomial:
        shift = FIELD_BITS * self.nvars
        return Polynomial._raw(self.nvars, self.ring,
                               {k: c for k, c in self._terms.items() if k >> shift == degree})

    def truncate(self, degree: int) -> Polynomial:
        """Drop every term of total degree greater than ``degree``."""
        bound = (degree + 1) << (FIELD_BITS * self.nvars)
        return Polynomial._raw(self.nvars, self.ring,
                               {k: c for k, c in self._terms.items() if k < bound})

    def nonlinear_part(self) -> Polynomial:
        bound = 2 << (FIELD_BITS * self.nvars)
        return Polynomial._raw(self.nvars, self.ring,
                               {k: c for k, c in self._terms.items() if k >= bound})

    def variables_used(self) -> set[int]:
        used = set()
        for k in self._terms:
            for i, e in enumerate(unpack(k, self.nvars)):
                if e:
                    used.add(i)
        return used

    def degree_in(self, index: int) -> int:
        shift = FIELD_BITS * (self.nvars - 1 - index)
        return max(((k >> shift) & FIELD_MASK for k in self._terms), default=0)

    # arithmetic

    def _check(self, other: Polynomial):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.nvars != other.nvars:
            raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, _SCALAR_TYPES):
            return Polynomial.constant(self.nvars, other, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        _add_into(acc, other._terms)
        return Polynomial._raw(self.nvars, self.ring, _clean(acc, self.ring.modulus))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        _add_into(acc, other._terms, -1)
        return Polynomial._raw(self.nvars, self.ring, _clean(acc, self.ring.modulus))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial._raw(self.nvars, self.ring,
                               _clean({k: -c for k, c in self._terms.items()}, self.ring.modulus))

    def scale(self, value) -> Polynomial:
        c = self.ring.coerce(value)
        return Polynomial._raw(self.nvars, self.ring,
                               _clean({k: v * c for k, v in self._terms.items()}, self.ring.modulus))

    def __mul__(self, other):
        if isinstance(other, _SCALAR_TYPES):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.mul(other)

    __rmul__ = __mul__

    def mul(self, other: Polynomial, truncate: int | None = None) -> Polynomial:
        self._check(other)
        if not self._terms or not other._terms:
            return Polynomial.zero(self.nvars, self.ring)
        if self.total_degree() + other.total_degree() > MAX_EXPONENT:
            raise ExponentOverflow("product degree exceeds the exponent range")
        bound = None if truncate is None else (truncate + 1) << (FIELD_BITS * self.nvars)
        return Polynomial._raw(self.nvars, self.ring,
                               _mul_terms(self._terms, other._terms, self.ring.modulus, bound))

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.nvars == other.nvars and self.ring == other.ring
                    and self._terms == other._terms)
        if isinstance(other, _SCALAR_TYPES):
            return self._terms == Polynomial.constant(self.nvars, other, self.ring)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.ring, frozenset(self._terms.items())))
        return self._hash

    # calculus and substitution

    def partial(self, index: int) -> Polynomial:
        if not 0 <= index < self.nvars:
            raise IndexOutOfRange(f"variable index {index} out of range for {self.nvars} variables")
        shift = FIELD_BITS * (self.nvars - 1 - index)
        step = (1 << shift) + (1 << (FIELD_BITS * self.nvars))
        out = {}
        for k, c in self._terms.items():
            e = (k >> shift) & FIELD_MASK
            if e:
                out[k - step] = c * e
        return Polynomial._raw(self.nvars, self.ring, _clean(out, self.ring.modulus))

    def gradient(self) -> list[Polynomial]:
        return [self.partial(i) for i in range(self.nvars)]

    def compose(self, args, truncate: int | None = None) -> Polynomial:
        """Substitute ``args[i]`` for variable ``i`` (Horner in each variable).

        With ``truncate`` set, every intermediate product drops terms of
        total degree above it.
        """
        args = list(args)
        if len(args) != self.nvars:
            raise ArityMismatch(f"compose needs {self.nvars} arguments, got {len(args)}")
        if not args:
            return self
        n2 = args[0].nvars
        for a in args:
            if a.ring != self.ring:
                raise RingMismatch(f"{a.ring} vs {self.ring}")
            if a.nvars != n2:
                raise ArityMismatch("composition arguments disagree on the number of variables")
        modulus = self.ring.modulus
        if truncate is None and self._terms:
            top = max((a.total_degree() for a in args if a._terms), default=0)
            if self.total_degree() * max(top, 1) > MAX_EXPONENT:
                raise ExponentOverflow("composition degree exceeds the exponent range")
        bound = None if truncate is None else (truncate + 1) << (FIELD_BITS * n2)
        if bound is not None:
            arg_terms = [{k: c for k, c in a._terms.items() if k < bound} for a in args]
        else:
            arg_terms = [a._terms for a in args]
        powers = [{1: t} for t in arg_terms]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                half = power(i, k // 2)
                sq = _mul_terms(half, half, modulus, bound)
                cache[k] = _mul_terms(sq, arg_terms[i], modulus, bound) if k % 2 else sq
            return cache[k]

        n = self.nvars

        def rec(items, i):
            if i == n:
                total = 0
                for _, c in items:
                    total += c
                if modulus:
                    total %= modulus
                return {0: total} if total else {}
            groups = defaultdict(list)
            for exps, c in items:
                groups[exps[i]].append((exps, c))
            acc = None
            prev = None
            for k in sorted(groups, reverse=True):
                sub = rec(groups[k], i + 1)
                if acc is None:
                    acc = sub
                else:
                    acc = _mul_terms(acc, power(i, prev - k), modulus, bound) if acc else {}
                    _add_into(acc, sub)
                    acc = _clean(acc, modulus)
                prev = k
            if prev and acc:
                acc = _mul_terms(acc, power(i, prev), modulus, bound)
            return acc

        items = [(unpack(k, n), c) for k, c in self._terms.items()]
        if not items:
            return Polynomial.zero(n2, self.ring)
        return Polynomial._raw(n2, self.ring, _clean(rec(items, 0), modulus))

    def evaluate(self, point):
        point = list(point)
        if len(point) != self.nvars:
            raise ArityMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        ring = self.ring
        vals = [ring.coerce(v) for v in point]
        m = ring.modulus
        total = ring.zero
        for k, c in self._terms.items():
            term = c
            for v, e in zip(vals, unpack(k, self.nvars)):
                if e:
                    term = term * (pow(v, e, m) if m else v ** e)
            total += term
        return total % m if m else total

    def extend(self, nvars: int) -> Polynomial:
        """Same polynomial viewed in ``nvars >= self.nvars`` variables (new ones appended)."""
        if nvars < self.nvars:
            raise ArityMismatch("cannot shrink the variable count")
        extra = FIELD_BITS * (nvars - self.nvars)
        old_shift = FIELD_BITS * self.nvars
        out = {}
        for k, c in self._terms.items():
            deg = k >> old_shift
            body = k & ((1 << old_shift) - 1)
            out[(deg << (FIELD_BITS * nvars)) | (body << extra)] = c
        return Polynomial._raw(nvars, self.ring, out)

    # printing

    def to_string(self, names=None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        rational = self.ring.modulus is None
        parts = []
        for k in sorted(self._terms, reverse=True):
            c = self._terms[k]
            negative = rational and c < 0
            mag = -c if negative else c
            factors = []
            for name, e in zip(names, unpack(k, self.nvars)):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.ring}, {self.to_string()!r})"


class UniPoly:
    """Univariate generator polynomial, coefficients by ascending power."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, coeffs=(), ring: RingSpec = QQ):
        cs = [ring.coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coefficient=1, ring: RingSpec = QQ) -> UniPoly:
        return cls([0] * degree + [coefficient], ring)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> UniPoly:
        if p.nvars != 1:
            raise ArityMismatch("a univariate generator must use exactly one variable")
        deg = p.total_degree()
        if deg == NEG_INF:
            return cls((), p.ring)
        coeffs = [p.ring.zero] * (deg + 1)
        for (e,), c in p.terms.items():
            coeffs[e] = c
        return cls(coeffs, p.ring)

    def to_polynomial(self) -> Polynomial:
        return Polynomial(1, self.ring, {(i,): c for i, c in enumerate(self.coeffs) if c != 0})

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def lowest_degree(self):
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.ring)

    def antiderivative(self) -> UniPoly:
        """Antiderivative with zero constant term; needs each ``k+1`` invertible."""
        ring = self.ring
        return UniPoly([0] + [ring.mul(c, ring.inverse(i + 1)) for i, c in enumerate(self.coeffs)], ring)

    def scale(self, value) -> UniPoly:
        c = self.ring.coerce(value)
        return UniPoly([a * c for a in self.coeffs], self.ring)

    def __add__(self, other: UniPoly) -> UniPoly:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)], self.ring)

    def evaluate(self, value):
        ring = self.ring
        acc = ring.zero
        m = ring.modulus
        for c in reversed(self.coeffs):
            acc = acc * value + c
            if m:
                acc %= m
        return acc

    def substitute(self, arg: Polynomial, truncate: int | None = None) -> Polynomial:
        if arg.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {arg.ring}")
        acc = Polynomial.zero(arg.nvars, arg.ring)
        for c in reversed(self.coeffs):
            acc = acc.mul(arg, truncate) + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def to_string(self, name: str = "x1") -> str:
        return self.to_polynomial().to_string([name])

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"UniPoly({self.to_string()!r}, {self.ring})"


# functional aliases


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p.mul(q)


def partial(p: Polynomial, index: int) -> Polynomial:
    return p.partial(index)


def compose(p: Polynomial, args, truncate: int | None = None) -> Polynomial:
    return p.compose(args, truncate)


def evaluate(p: Polynomial, point):
    return p.evaluate(point)


def total_degree(p: Polynomial):
    return p.total_degree()


def uni_derivative(s: UniPoly) -> UniPoly:
    return s.derivative()


def uni_substitute(s: UniPoly, arg: Polynomial) -> Polynomial:
    return s.substitute(arg)
