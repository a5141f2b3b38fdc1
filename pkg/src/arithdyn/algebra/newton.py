"""p-adic root valuations read off Newton polygons."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import HomForm
from .integers import require_prime, valuation


@dataclass(frozen=True)
class ValuationMultiset:
    """Valuations of the roots of a form, counted with multiplicity.

    ``slopes`` holds the valuations of the finite nonzero roots; roots at
    ``(0:1)`` (valuation +inf) and at ``(1:0)`` are counted separately.
    """

    slopes: Counter = field(default_factory=Counter)
    zero_roots: int = 0
    infinite_roots: int = 0

    @property
    def total(self) -> int:
        return sum(self.slopes.values()) + self.zero_roots + self.infinite_roots

    def finite_sum(self) -> Fraction:
        return sum((v * k for v, k in self.slopes.items()), Fraction(0))

    def as_sorted_list(self) -> list[Fraction]:
        return sorted(self.slopes.elements())


def lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, Fraction]]:
    """Lower convex hull of points sorted by abscissa (monotone chain)."""
    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_root_valuations(a: HomForm, p: int) -> ValuationMultiset:
    """Multiset of v_p over the roots of ``a`` in P^1(C_p)."""
    p = require_prime(p)
    if a.is_zero:
        raise ValueError("zero form")
    k_inf = a.infinity_multiplicity()
    k_zero = a.zero_multiplicity()
    f = a.affine()                         # descending in z, f[0] != 0
    if k_zero:
        f = f[: len(f) - k_zero]
    n = len(f) - 1
    # abscissa i = power of z
    pts = [(i, Fraction(valuation(f[n - i], p))) for i in range(n + 1) if f[n - i] != 0]
    hull = lower_hull(pts)
    slopes: Counter = Counter()
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes[-(y2 - y1) / (x2 - x1)] += x2 - x1
    return ValuationMultiset(slopes=slopes, zero_roots=k_zero, infinite_roots=k_inf)
