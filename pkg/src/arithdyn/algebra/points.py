"""Rational points of the projective line with canonical coprime coordinates."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .forms import HomForm


@dataclass(frozen=True, order=True)
class ProjPointQ:
    """The point (a:b) with gcd(a, b) = 1 and b > 0, or (1:0)."""

    a: int
    b: int

    def __post_init__(self):
        a, b = int(self.a), int(self.b)
        if a == 0 and b == 0:
            raise ValueError("(0:0) is not a projective point")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def infinity(cls) -> "ProjPointQ":
        return cls(1, 0)

    @classmethod
    def from_value(cls, x) -> "ProjPointQ":
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @classmethod
    def parse(cls, text: str) -> "ProjPointQ":
        """Accept 'inf', 'a/b', an integer, or 'a:b'."""
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo", "∞"):
            return cls.infinity()
        for sep in (":", "/"):
            if sep in t:
                a, b = t.split(sep)
                return cls(int(a), int(b))
        return cls.from_value(Fraction(t))

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    @property
    def lift(self) -> tuple[int, int]:
        return (self.a, self.b)

    def value(self) -> Fraction:
        if self.is_infinity:
            raise ValueError("the point at infinity has no affine value")
        return Fraction(self.a, self.b)

    def form(self) -> HomForm:
        """Primitive linear form vanishing at this point."""
        return HomForm.linear(self.a, self.b).primitive_part()

    def height_bits(self) -> int:
        return max(abs(self.a).bit_length(), abs(self.b).bit_length())

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, data) -> "ProjPointQ":
        return cls(int(data[0]), int(data[1]))

    def __str__(self) -> str:
        if self.is_infinity:
            return "inf"
        if self.b == 1:
            return str(self.a)
        return f"{self.a}/{self.b}"


def wedge(z, w):
    """z0*w1 - z1*w0."""
    return z[0] * w[1] - z[1] * w[0]
