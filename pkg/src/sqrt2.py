# src/sqrt2.py — Exact Scalars (a + b√2) / 2^k
"""
The amplitude ring Z[1/√2] used by B̃_i matrices and icrystal morphisms.

Every value is kept in normal form: k is minimal, i.e. k = 0 or a, b are
not both even. Equal values therefore have equal (a, b, k) triples, which
makes scalars usable as dict keys and makes equality exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Tuple

from sympy import Expr, Integer, sqrt

SQRT2_FLOAT = math.sqrt(2.0)


@total_ordering
class Sqrt2Scalar:
    """
    Exact element (a + b√2) / 2^k of Z[1/√2].

    Args:
        a: Rational-part numerator.
        b: √2-part numerator.
        k: Power of two in the denominator (non-negative).
    """

    __slots__ = ('_a', '_b', '_k')

    def __init__(self, a: int = 0, b: int = 0, k: int = 0):
        if k < 0:
            # fold 2^{-k} = 2^{|k|} into the numerators
            a, b, k = a << -k, b << -k, 0
        while k > 0 and a % 2 == 0 and b % 2 == 0:
            a, b, k = a // 2, b // 2, k - 1
        if a == 0 and b == 0:
            k = 0
        self._a, self._b, self._k = a, b, k

    @property
    def a(self) -> int:
        return self._a

    @property
    def b(self) -> int:
        return self._b

    @property
    def k(self) -> int:
        return self._k

    def triple(self) -> Tuple[int, int, int]:
        return (self._a, self._b, self._k)

    # ─── constructors ───

    @classmethod
    def from_int(cls, x: int) -> Sqrt2Scalar:
        return cls(x, 0, 0)

    @classmethod
    def from_fraction(cls, x: Fraction) -> Sqrt2Scalar:
        """
        Convert a dyadic rational.

        Raises:
            ValueError: If the denominator is not a power of two.
        """
        x = Fraction(x)
        den = x.denominator
        if den & (den - 1):
            raise ValueError(f"{x} is not dyadic")
        return cls(x.numerator, 0, den.bit_length() - 1)

    @classmethod
    def sqrt2_power(cls, e: int) -> Sqrt2Scalar:
        """√2^e for any integer e."""
        if e >= 0:
            return cls(1 << (e // 2), 0, 0) if e % 2 == 0 else cls(0, 1 << (e // 2), 0)
        e = -e
        # 1/√2^e = √2^e / 2^e
        return cls.sqrt2_power(e) * cls(1, 0, e)

    # ─── ring operations ───

    def __add__(self, other) -> Sqrt2Scalar:
        if isinstance(other, int):
            other = Sqrt2Scalar.from_int(other)
        if not isinstance(other, Sqrt2Scalar):
            return NotImplemented
        k = max(self._k, other._k)
        sa, oa = self._k - k, other._k - k
        return Sqrt2Scalar(
            (self._a << -sa) + (other._a << -oa),
            (self._b << -sa) + (other._b << -oa),
            k,
        )

    __radd__ = __add__

    def __neg__(self) -> Sqrt2Scalar:
        return Sqrt2Scalar(-self._a, -self._b, self._k)

    def __sub__(self, other) -> Sqrt2Scalar:
        if isinstance(other, int):
            other = Sqrt2Scalar.from_int(other)
        if not isinstance(other, Sqrt2Scalar):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Sqrt2Scalar:
        return (-self) + other

    def __mul__(self, other) -> Sqrt2Scalar:
        if isinstance(other, int):
            other = Sqrt2Scalar.from_int(other)
        if not isinstance(other, Sqrt2Scalar):
            return NotImplemented
        return Sqrt2Scalar(
            self._a * other._a + 2 * self._b * other._b,
            self._a * other._b + self._b * other._a,
            self._k + other._k,
        )

    __rmul__ = __mul__

    def conj(self) -> Sqrt2Scalar:
        """Galois conjugate √2 -> -√2."""
        return Sqrt2Scalar(self._a, -self._b, self._k)

    def norm_squared(self) -> Fraction:
        """The value squared, as an exact rational when b = 0 or a = 0."""
        if self._a and self._b:
            raise ValueError(f"{self} squared is not rational")
        return Fraction(self._a * self._a + 2 * self._b * self._b, 4 ** self._k)

    # ─── comparisons ───

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = Sqrt2Scalar.from_int(other)
        if not isinstance(other, Sqrt2Scalar):
            return False
        return self.triple() == other.triple()

    def __hash__(self) -> int:
        # rational values hash like the int they compare equal to
        if self._b == 0:
            return hash(Fraction(self._a, 1 << self._k))
        return hash(('Sqrt2Scalar',) + self.triple())

    def sign(self) -> int:
        """Sign of a + b√2 (the 2^k denominator is positive)."""
        a, b = self._a, self._b
        if a >= 0 and b >= 0:
            return 0 if a == 0 and b == 0 else 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def __lt__(self, other) -> bool:
        if isinstance(other, int):
            other = Sqrt2Scalar.from_int(other)
        if not isinstance(other, Sqrt2Scalar):
            return NotImplemented
        return (self - other).sign() < 0

    def __bool__(self) -> bool:
        return bool(self._a or self._b)

    def __float__(self) -> float:
        return (self._a + self._b * SQRT2_FLOAT) / (2 ** self._k)

    def as_expr(self) -> Expr:
        """The value as an exact sympy expression."""
        return (Integer(self._a) + Integer(self._b) * sqrt(2)) / Integer(2) ** self._k

    # ─── text ───

    def __repr__(self) -> str:
        return f"Sqrt2Scalar({self._a}, {self._b}, {self._k})"

    def __str__(self) -> str:
        parts = []
        if self._a:
            parts.append(str(self._a))
        if self._b:
            coef = {1: '', -1: '-'}.get(self._b, str(self._b))
            term = f"{coef}√2"
            if parts and not term.startswith('-'):
                term = '+' + term
            parts.append(term)
        text = ''.join(parts) or '0'
        if self._k:
            if len(parts) > 1:
                text = f"({text})"
            text = f"{text}/{2 ** self._k}"
        return text

    def to_json(self) -> Dict[str, int]:
        return {'a': self._a, 'b': self._b, 'k': self._k}

    @classmethod
    def from_json(cls, raw: Dict[str, int]) -> Sqrt2Scalar:
        return cls(int(raw['a']), int(raw['b']), int(raw['k']))


ZERO = Sqrt2Scalar(0, 0, 0)
ONE = Sqrt2Scalar(1, 0, 0)
INV_SQRT2 = Sqrt2Scalar(0, 1, 1)
