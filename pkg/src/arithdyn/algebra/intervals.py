"""Small conveniences around mpmath's interval context.

mpmath intervals compare three-valued, so every decision in this package is
taken on explicit endpoints obtained here.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv, mp

DEFAULT_PRECISION = 128


@contextmanager
def precision(bits: int):
    """Set both the point and the interval contexts to ``bits`` of mantissa."""
    saved = iv.prec
    iv.prec = bits
    try:
        with mp.workprec(bits):
            yield
    finally:
        iv.prec = saved


def lo(x):
    return mp.make_mpf(x._mpi_[0])


def hi(x):
    return mp.make_mpf(x._mpi_[1])


def raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def mpf_to_fraction(x) -> Fraction:
    """Exact value of an mpf (no rounding to the ambient precision)."""
    raw = x._mpf_ if hasattr(x, "_mpf_") else mp.mpf(x)._mpf_
    return raw_to_fraction(raw)


def lo_fraction(x) -> Fraction:
    return raw_to_fraction(x._mpi_[0])


def hi_fraction(x) -> Fraction:
    return raw_to_fraction(x._mpi_[1])


def upper_float(x) -> float:
    """A float >= every point of the interval (or mpf) x."""
    v = x if not hasattr(x, "_mpi_") else hi(x)
    f = float(v)
    return math.nextafter(f, math.inf) if math.isfinite(f) else f


def lower_float(x) -> float:
    v = x if not hasattr(x, "_mpi_") else lo(x)
    f = float(v)
    return math.nextafter(f, -math.inf) if math.isfinite(f) else f


def estimate(x) -> tuple[float, float]:
    """(midpoint, radius) floats with |t - midpoint| <= radius for all t in x."""
    a, b = lo(x), hi(x)
    if not (mp.isfinite(a) and mp.isfinite(b)):
        return float("nan"), math.inf
    mid = float((a + b) / 2)
    qa, qb, qm = raw_to_fraction(x._mpi_[0]), raw_to_fraction(x._mpi_[1]), Fraction(mid)
    rad = max(qb - qm, qm - qa)
    r = float(rad)
    if Fraction(r) < rad:
        r = math.nextafter(r, math.inf)
    return mid, r


def width(x):
    return hi(x) - lo(x)


def from_fraction(q: Fraction):
    q = Fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def hull(a, b):
    """Interval [a, b] from two mpf endpoints (outward rounded to iv precision)."""
    return iv.mpf([a, b])


def real_ball(center, radius):
    """Interval containing [center - radius, center + radius] exactly."""
    c = iv.mpf(center)
    r = iv.mpf(radius)
    return iv.mpf([lo(c - r), hi(c + r)])


def complex_box(center, radius):
    """Rectangle containing the closed disc of given center and radius."""
    c = mp.mpc(center)
    return iv.mpc(real_ball(c.real, radius), real_ball(c.imag, radius))


def abs2(z):
    """|z|^2 for an iv.mpc (or iv.mpf) argument."""
    if isinstance(z, iv.mpc):
        return z.real ** 2 + z.imag ** 2
    return z ** 2


def upper_abs(z):
    """Upper bound (mpf) on |z| over a box."""
    return hi(iv.sqrt(abs2(z)))


def lower_abs(z):
    """Lower bound (mpf, possibly 0) on |z| over a box."""
    s = abs2(z)
    a = lo(s)
    if a <= 0:
        return mp.mpf(0)
    return lo(iv.sqrt(iv.mpf([a, a])))
