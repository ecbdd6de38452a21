"""Toy block cipher whose key is a polynomial automorphism of (Z/mZ)^n.

Two key shapes are supported:

* ``full-invariance``: ``xi = a_1 x_1 + ... + a_{n-1} x_{n-1} + x_n``,
  ``u_i = x_i + phi_i(xi)`` for i < n and ``u_n = x_n - sum a_i phi_i(xi)``.
  The form ``xi`` is the same before and after encryption, so decryption
  reads it off the ciphertext and subtracts.
* ``triangular``: ``u_i = lambda_i x_i + f_i(x_1, ..., x_{i-1})`` with unit
  ``lambda_i``, undone one coordinate at a time.

Keys are derived from a 64-bit seed with SplitMix64::

    state <- state + 0x9E3779B97F4A7C15            (mod 2^64)
    z <- state
    z <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (mod 2^64)
    z <- (z ^ (z >> 27)) * 0x94D049BB133111EB      (mod 2^64)
    output z ^ (z >> 31)

``below(k)`` draws uniformly from [0, k) by rejecting outputs at or above
the largest multiple of k not exceeding 2^64.  Draw order for a
full-invariance key: ``a_1..a_{n-1}`` (each ``below(m)``); then for each
``phi_i`` its degree ``2 + below(max_degree - 1)`` followed by the
coefficients of powers 2..degree, each ``below(m)``, the leading one
redrawn until nonzero.  For a triangular key: ``lambda_1..lambda_n``
(each ``1 + below(m - 1)``, redrawn up to 64 times until a unit mod m);
then for i = 2..n a term count ``1 + below(3)`` and per term a degree
``2 + below(max_degree - 1)``, that many ``below(i - 1)`` variable picks
and a coefficient ``1 + below(m - 1)``.

Nothing here is meant to be secure.

Byte codec: the message is prefixed with its length as 8 bytes big-endian,
zero-padded to a multiple of n, each byte becomes one ring element, and
each ciphertext element is written as ``ceil(log256 m)`` bytes big-endian.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    BadDimension,
    BadModulus,
    BlockLengthMismatch,
    MalformedCiphertext,
    MalformedDocument,
    NonInvertibleLambda,
    NotInvertible,
    PolySyntaxError,
)
from .families import AutomorphismPair, dimN_full, triangular_param
from .poly import Polynomial, UniPoly
from .ring import RingSpec

KEY_FORMAT_VERSION = 1
MIN_BYTE_MODULUS = 257
LAMBDA_ATTEMPTS = 64
_MASK = (1 << 64) - 1


class Variant(enum.Enum):
    FULL_INVARIANCE = "full-invariance"
    TRIANGULAR = "triangular"

    @classmethod
    def parse(cls, text) -> Variant:
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "-")
        aliases = {"full": cls.FULL_INVARIANCE, "fullinvariance": cls.FULL_INVARIANCE,
                   "tri": cls.TRIANGULAR}
        for member in cls:
            if member.value == key:
                return member
        if key.replace("-", "") in aliases:
            return aliases[key.replace("-", "")]
        raise MalformedDocument(f"unknown key variant {text!r}")


class SplitMix64:
    """64-bit splittable PRG; see the module docstring for the exact recurrence."""

    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("bound must be positive")
        if k > 1 << 64:
            # wide moduli: concatenate enough 64-bit words, still rejection sampled
            words = (k.bit_length() + 63) // 64
            span = 1 << (64 * words)
            limit = span - span % k
            while True:
                v = 0
                for _ in range(words):
                    v = (v << 64) | self.next()
                if v < limit:
                    return v % k
        limit = (1 << 64) - (1 << 64) % k
        while True:
            v = self.next()
            if v < limit:
                return v % k


@dataclass(frozen=True)
class CipherKey:
    """Key material; ``coefficients`` are ``a_1..a_{n-1}`` or ``lambda_1..lambda_n``.

    ``generators`` are ``phi_1..phi_{n-1}`` (UniPoly) or ``f_2..f_n``
    (Polynomial in n variables, ``f_i`` using only ``x_1..x_{i-1}``).
    """

    variant: Variant
    n: int
    modulus: int
    coefficients: tuple
    generators: tuple

    def __post_init__(self):
        if self.n < 2:
            raise BadDimension(f"block dimension must be >= 2, got {self.n}")
        if self.modulus < 2:
            raise BadModulus(f"modulus must be >= 2, got {self.modulus}")
        m = self.modulus
        object.__setattr__(self, "coefficients", tuple(int(c) % m for c in self.coefficients))
        object.__setattr__(self, "generators", tuple(self.generators))
        expect_c = self.n - 1 if self.variant is Variant.FULL_INVARIANCE else self.n
        if len(self.coefficients) != expect_c or len(self.generators) != self.n - 1:
            raise MalformedDocument(
                f"{self.variant.value} key with n = {self.n} needs {expect_c} coefficients "
                f"and {self.n - 1} generators")
        for g in self.generators:
            if g.ring != self.ring:
                raise MalformedDocument(f"generator {g} is not over {self.ring}")
            low = g.lowest_degree()
            if not g.is_zero() and low < 2:
                raise MalformedDocument(f"generator {g} has constant or linear terms")
        if self.variant is Variant.TRIANGULAR:
            for i, lam in enumerate(self.coefficients):
                if math.gcd(lam, m) != 1:
                    raise NonInvertibleLambda(f"lambda_{i + 1} = {lam} is not a unit mod {m}")
            for i, f in enumerate(self.generators, start=2):
                if f.nvars != self.n:
                    raise MalformedDocument(f"f_{i} must be in {self.n} variables")
                late = [j for j in f.variables_used() if j >= i - 1]
                if late:
                    raise MalformedDocument(f"f_{i} uses x{late[0] + 1}; only x1..x{i - 1} allowed")

    @property
    def ring(self) -> RingSpec:
        return RingSpec.integers_mod(self.modulus)

    @property
    def element_width(self) -> int:
        return max(1, ((self.modulus - 1).bit_length() + 7) // 8)

    def pair(self) -> AutomorphismPair:
        """The key as a polynomial automorphism (forward = encryption map)."""
        ring = self.ring
        if self.variant is Variant.FULL_INVARIANCE:
            return dimN_full(list(self.coefficients) + [1], list(self.generators), ring)
        return triangular_param(list(self.coefficients),
                                [Polynomial.zero(self.n, ring)] + list(self.generators), ring)

    def to_text(self) -> str:
        lines = [f"polyauto-key: {KEY_FORMAT_VERSION}", f"variant: {self.variant.value}",
                 f"n: {self.n}", f"modulus: {self.modulus}",
                 "coefficients: " + " ".join(str(c) for c in self.coefficients)]
        lines.extend(f"generator: {g}" for g in self.generators)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CipherKey:
        from .parse import parse_polynomial

        fields, gens = {}, []
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
                fields[key] = value
        for required in ("polyauto-key", "variant", "n", "modulus", "coefficients"):
            if required not in fields:
                raise MalformedDocument(f"key file lacks '{required}:'")
        if fields["polyauto-key"] != str(KEY_FORMAT_VERSION):
            raise MalformedDocument(f"unsupported key format version {fields['polyauto-key']}")
        try:
            n, m = int(fields["n"]), int(fields["modulus"])
            coeffs = [int(t) for t in fields["coefficients"].split()]
        except ValueError as exc:
            raise MalformedDocument(f"bad number in key file: {exc}") from None
        variant = Variant.parse(fields["variant"])
        if m < 2:
            raise BadModulus(f"modulus must be >= 2, got {m}")
        ring = RingSpec.integers_mod(m)
        if variant is Variant.FULL_INVARIANCE:
            generators = [UniPoly.from_polynomial(parse_polynomial(t, 1, ring, ln)) for ln, t in gens]
        else:
            generators = [parse_polynomial(t, n, ring, ln) for ln, t in gens]
        return cls(variant, n, m, tuple(coeffs), tuple(generators))


def draw_unit(prg: SplitMix64, m: int, attempts: int = LAMBDA_ATTEMPTS) -> int:
    """``1 + below(m - 1)``, redrawn until coprime to m, at most ``attempts`` times."""
    for _ in range(attempts):
        v = 1 + prg.below(m - 1)
        if math.gcd(v, m) == 1:
            return v
    raise NonInvertibleLambda(f"no unit mod {m} after {attempts} draws")


def keygen(variant, n: int, modulus: int, seed: int, max_degree: int = 3, toy: bool = False) -> CipherKey:
    """Deterministic key from ``seed``.

    ``modulus >= 257`` is required so that bytes embed in the ring; pass
    ``toy=True`` to allow any modulus >= 2 for block-level experiments.
    """
    variant = Variant.parse(variant)
    if n < 2:
        raise BadDimension(f"block dimension must be >= 2, got {n}")
    if modulus < (2 if toy else MIN_BYTE_MODULUS):
        raise BadModulus(f"modulus {modulus} too small (need >= {2 if toy else MIN_BYTE_MODULUS})")
    if max_degree < 2:
        raise ValueError("max_degree must be >= 2")
    prg = SplitMix64(seed)
    ring = RingSpec.integers_mod(modulus)
    m = modulus
    if variant is Variant.FULL_INVARIANCE:
        a = [prg.below(m) for _ in range(n - 1)]
        phis = []
        for _ in range(n - 1):
            d = 2 + prg.below(max_degree - 1)
            coeffs = [0, 0] + [prg.below(m) for _ in range(d - 1)]
            while coeffs[-1] == 0:
                coeffs[-1] = prg.below(m)
            phis.append(UniPoly(coeffs, ring))
        return CipherKey(variant, n, m, tuple(a), tuple(phis))
    lambdas = [draw_unit(prg, m) for _ in range(n)]
    fs = []
    for i in range(2, n + 1):
        terms: dict = {}
        for _ in range(1 + prg.below(3)):
            d = 2 + prg.below(max_degree - 1)
            exps = [0] * n
            for _ in range(d):
                exps[prg.below(i - 1)] += 1
            key = tuple(exps)
            terms[key] = (terms.get(key, 0) + 1 + prg.below(m - 1)) % m
        fs.append(Polynomial(n, ring, terms))
    return CipherKey(variant, n, m, tuple(lambdas), tuple(fs))


def _check_block(key: CipherKey, block) -> list:
    block = [int(v) for v in block]
    if len(block) != key.n:
        raise BlockLengthMismatch(f"block of length {len(block)}, key has n = {key.n}")
    return [v % key.modulus for v in block]


def invariant(key: CipherKey, block) -> int:
    """``xi = sum a_i x_i + x_n`` (full-invariance keys only)."""
    if key.variant is not Variant.FULL_INVARIANCE:
        raise MalformedDocument("only full-invariance keys carry an invariant form")
    block = _check_block(key, block)
    m = key.modulus
    return (sum(a * x for a, x in zip(key.coefficients, block)) + block[-1]) % m


def encrypt_block(key: CipherKey, block) -> list:
    x = _check_block(key, block)
    m = key.modulus
    if key.variant is Variant.FULL_INVARIANCE:
        xi = invariant(key, x)
        vals = [phi.evaluate(xi) for phi in key.generators]
        u = [(xv + v) % m for xv, v in zip(x, vals)]
        u.append((x[-1] - sum(a * v for a, v in zip(key.coefficients, vals))) % m)
        return u
    u = [key.coefficients[0] * x[0] % m]
    for i in range(1, key.n):
        u.append((key.coefficients[i] * x[i] + key.generators[i - 1].evaluate(x)) % m)
    return u


def decrypt_block(key: CipherKey, block) -> list:
    u = _check_block(key, block)
    m = key.modulus
    if key.variant is Variant.FULL_INVARIANCE:
        xi = invariant(key, u)  # unchanged by encryption
        vals = [phi.evaluate(xi) for phi in key.generators]
        x = [(uv - v) % m for uv, v in zip(u, vals)]
        x.append((u[-1] + sum(a * v for a, v in zip(key.coefficients, vals))) % m)
        return x
    ring = key.ring
    try:
        inv = [ring.inverse(lam) for lam in key.coefficients]
    except NotInvertible as exc:
        raise NonInvertibleLambda(str(exc)) from None
    x = [u[0] * inv[0] % m] + [0] * (key.n - 1)
    for i in range(1, key.n):
        # f_i only reads x_1..x_{i-1}, which are already recovered
        x[i] = (u[i] - key.generators[i - 1].evaluate(x)) * inv[i] % m
    return x


def encrypt_bytes(key: CipherKey, msg: bytes) -> bytes:
    if key.modulus < MIN_BYTE_MODULUS:
        raise BadModulus(f"modulus {key.modulus} cannot hold a byte; need >= {MIN_BYTE_MODULUS}")
    data = len(msg).to_bytes(8, "big") + bytes(msg)
    n, w = key.n, key.element_width
    data += bytes(-len(data) % n)
    out = bytearray()
    for start in range(0, len(data), n):
        for v in encrypt_block(key, data[start:start + n]):
            out += v.to_bytes(w, "big")
    return bytes(out)


def decrypt_bytes(key: CipherKey, ct: bytes) -> bytes:
    if key.modulus < MIN_BYTE_MODULUS:
        raise BadModulus(f"modulus {key.modulus} cannot hold a byte; need >= {MIN_BYTE_MODULUS}")
    n, w, m = key.n, key.element_width, key.modulus
    if len(ct) == 0 or len(ct) % (n * w):
        raise MalformedCiphertext(f"ciphertext length {len(ct)} is not a positive multiple of {n * w}")
    elems = [int.from_bytes(ct[i:i + w], "big") for i in range(0, len(ct), w)]
    if any(v >= m for v in elems):
        raise MalformedCiphertext(f"ciphertext element outside [0, {m})")
    plain = bytearray()
    for start in range(0, len(elems), n):
        for v in decrypt_block(key, elems[start:start + n]):
            if v > 255:
                raise MalformedCiphertext("decrypted element is not a byte")
            plain.append(v)
    if len(plain) < 8:
        raise MalformedCiphertext("ciphertext shorter than the length header")
    length = int.from_bytes(plain[:8], "big")
    expected = 8 + length + (-(8 + length) % n)
    if expected != len(plain):
        raise MalformedCiphertext(f"length header says {length} bytes, payload holds {len(plain) - 8}")
    if any(plain[8 + length:]):
        raise MalformedCiphertext("nonzero padding")
    return bytes(plain[8:8 + length])
