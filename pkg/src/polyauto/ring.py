"""Coefficient rings: exact rationals and integers modulo m."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from gmpy2 import mpq

from .errors import BadModulus, NotInvertible, PolySyntaxError

RATIONALS = "Q"
INTEGERS_MOD = "Zmod"


@dataclass(frozen=True)
class RingSpec:
    """Descriptor of a commutative coefficient ring with unity.

    Rational elements are ``gmpy2.mpq`` values (always in lowest terms);
    elements of Z/mZ are Python ints in ``[0, m)``.
    """

    kind: str = RATIONALS
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.modulus is not None:
                raise BadModulus("the rational field takes no modulus")
        elif self.kind == INTEGERS_MOD:
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise BadModulus(f"modulus must be an integer >= 2, got {self.modulus!r}")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> RingSpec:
        return cls(RATIONALS)

    @classmethod
    def integers_mod(cls, m: int) -> RingSpec:
        return cls(INTEGERS_MOD, int(m))

    @property
    def is_field_of_fractions(self) -> bool:
        return self.kind == RATIONALS

    def __str__(self):
        return "Q" if self.kind == RATIONALS else f"Zmod {self.modulus}"

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        words = text.split()
        if words == ["Q"]:
            return cls.rationals()
        if len(words) == 2 and words[0] == "Zmod" and words[1].isdigit():
            try:
                return cls.integers_mod(int(words[1]))
            except BadModulus as exc:
                raise PolySyntaxError(str(exc)) from None
        raise PolySyntaxError(f"unrecognised ring descriptor {text.strip()!r} (expected 'Q' or 'Zmod m')")

    # element handling

    @property
    def zero(self):
        return mpq(0) if self.kind == RATIONALS else 0

    @property
    def one(self):
        return mpq(1) if self.kind == RATIONALS else 1 % self.modulus

    def coerce(self, value):
        """Map an int, Fraction, mpq or numeric string into the ring."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.kind == RATIONALS:
            if isinstance(value, Fraction):
                return mpq(value.numerator, value.denominator)
            return mpq(value)
        if isinstance(value, (Fraction, mpq)):
            num, den = int(value.numerator), int(value.denominator)
            return num * self.inverse(den) % self.modulus
        return int(value) % self.modulus

    def is_zero(self, value) -> bool:
        return value == 0

    def is_unit(self, value) -> bool:
        if self.kind == RATIONALS:
            return value != 0
        return gcd(int(value), self.modulus) == 1

    def inverse(self, value):
        if self.kind == RATIONALS:
            if value == 0:
                raise NotInvertible("division by zero in Q")
            return 1 / mpq(value)
        value = int(value) % self.modulus
        try:
            return pow(value, -1, self.modulus)
        except ValueError:
            raise NotInvertible(f"{value} is not invertible modulo {self.modulus}") from None

    def div(self, a, b):
        return self.mul(a, self.inverse(b))

    def add(self, a, b):
        return a + b if self.kind == RATIONALS else (a + b) % self.modulus

    def sub(self, a, b):
        return a - b if self.kind == RATIONALS else (a - b) % self.modulus

    def mul(self, a, b):
        return a * b if self.kind == RATIONALS else (a * b) % self.modulus

    def neg(self, a):
        return -a if self.kind == RATIONALS else (-a) % self.modulus

    def format(self, value) -> str:
        return str(value)


QQ = RingSpec.rationals()
