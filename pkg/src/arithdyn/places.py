"""Places of Q and exact rational combinations of logarithms of primes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra.integers import require_prime


@dataclass(frozen=True, order=True)
class Place:
    """The archimedean place (``p is None``) or the p-adic place for a prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            object.__setattr__(self, "p", require_prime(self.p))

    @classmethod
    def arch(cls) -> "Place":
        return cls(None)

    @classmethod
    def parse(cls, text) -> "Place":
        t = str(text).strip().lower()
        if t in ("inf", "infinity", "arch", "oo"):
            return cls(None)
        return cls(int(t))

    @property
    def is_archimedean(self) -> bool:
        return self.p is None

    @property
    def key(self) -> str:
        return "inf" if self.p is None else str(self.p)

    def __str__(self) -> str:
        return self.key


ARCH = Place(None)


@dataclass(frozen=True)
class LogValue:
    """sum_p coeff_p * log p with rational coefficients."""

    terms: tuple[tuple[int, Fraction], ...] = field(default=())

    @classmethod
    def of(cls, p: int, coeff) -> "LogValue":
        c = Fraction(coeff)
        return cls(((p, c),) if c else ())

    @classmethod
    def from_dict(cls, d: dict[int, Fraction]) -> "LogValue":
        return cls(tuple(sorted((p, Fraction(c)) for p, c in d.items() if c)))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def __add__(self, other: "LogValue") -> "LogValue":
        d = self.as_dict()
        for p, c in other.terms:
            d[p] = d.get(p, Fraction(0)) + c
        return LogValue.from_dict(d)

    def __neg__(self) -> "LogValue":
        return LogValue(tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def scale(self, factor) -> "LogValue":
        f = Fraction(factor)
        return LogValue.from_dict({p: c * f for p, c in self.terms})

    def __float__(self) -> float:
        return math.fsum(float(c) * math.log(p) for p, c in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def to_json(self) -> list:
        return [[str(c), f"log {p}"] for p, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*log({p})" for p, c in self.terms)
