"""Projective metrics, Green pairings and their Galois-orbit averages.

The pairing used throughout is

    g_v(P, Q) = eta_v(P) + eta_v(Q) - log delta_v(P, Q),   eta_v = G_v(lift) - log||lift||_v,

which does not depend on lifts.  It is -log delta_v wherever phi has good
reduction, and summing over all places gives h(P) + h(Q) by the product
formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from mpmath import iv, mp

from .algebra.forms import resultant
from .algebra.integers import prime_factors, require_prime, valuation
from .algebra.intervals import DEFAULT_PRECISION, estimate, hi, lo, precision
from .algebra.points import ProjPointQ, wedge
from .algebra.roots import MAX_PRECISION, complex_roots_certified
from .dynamics import AlgebraicSet, RationalMap, bad_primes, height_constants
from .errors import EqualPoints, PrecisionError, SharedPoint, UnsupportedPlacePoint
from .heights import (
    _ivc,
    _positive_log,
    arch_eta_interval,
    arch_terms_needed,
    escape_rate_padic_rational,
)
from .places import ARCH, LogValue, Place


@dataclass(frozen=True)
class LocalValue:
    """A real number at one place: float value with a rigorous bound.

    ``exact`` is set at p-adic places, where values are rational multiples
    of log p (partial sums when ``error_bound`` > 0).
    """

    value: float
    error_bound: float
    place: Place
    exact: LogValue | None = None

    def to_json(self) -> dict:
        out = {"value": repr(self.value), "error_bound": repr(self.error_bound)}
        if self.exact is not None:
            out["exact"] = self.exact.to_json()
        return out


@dataclass
class GreenReport:
    per_place: dict[Place, LocalValue]
    total: float
    error_bound: float
    set_size: int
    orbit_size: int

    def to_json(self) -> dict:
        return {
            "per_place": {v.key: lv.to_json() for v, lv in sorted(self.per_place.items(), key=_place_order)},
            "total": repr(self.total),
            "error_bound": repr(self.error_bound),
            "set_size": self.set_size,
            "orbit_size": self.orbit_size,
        }


def _place_order(item):
    v = item[0]
    return (0, 0) if v.p is None else (1, v.p)


@dataclass
class IntegralityVerdict:
    integral: bool
    witnesses: list[tuple[int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"integral": self.integral, "witnesses": [[p, e] for p, e in self.witnesses]}


def _fsum_bound(values: Iterable[float]) -> float:
    vals = list(values)
    s = math.fsum(vals)
    return math.nextafter(s + 4 * len(vals) * math.ulp(max(abs(s), 1.0)), math.inf)


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

def proj_metric(v: Place, P: ProjPointQ, Q: ProjPointQ):
    """delta_v(P, Q): a Fraction at primes, a float at the archimedean place."""
    w = wedge(P.lift, Q.lift)
    if v.is_archimedean:
        with mp.workprec(DEFAULT_PRECISION):
            return float(abs(w) / (mp.sqrt(P.a ** 2 + P.b ** 2) * mp.sqrt(Q.a ** 2 + Q.b ** 2)))
    if w == 0:
        return Fraction(0)
    return Fraction(1, v.p ** valuation(w, v.p))


def _log_delta_arch(z, w):
    """Enclosure of log delta_inf for lift boxes z, w."""
    wz = z[0] * w[1] - z[1] * w[0]
    n = wz.real ** 2 + wz.imag ** 2
    nz = z[0].real ** 2 + z[0].imag ** 2 + z[1].real ** 2 + z[1].imag ** 2
    nw = w[0].real ** 2 + w[0].imag ** 2 + w[1].real ** 2 + w[1].imag ** 2
    return (_positive_log(n) - _positive_log(nz) - _positive_log(nw)) / 2


# ---------------------------------------------------------------------------
# pairings of rational points
# ---------------------------------------------------------------------------

def green_pair(
    phi: RationalMap, v: Place, P: ProjPointQ, Q: ProjPointQ, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> LocalValue:
    if P == Q:
        raise EqualPoints("the Green pairing is singular on the diagonal")
    if v.is_archimedean:
        terms = arch_terms_needed(phi, tol / 4)
        p = max(int(prec), 64)
        while True:
            try:
                with precision(p):
                    zP = (_ivc(P.a), _ivc(P.b))
                    zQ = (_ivc(Q.a), _ivc(Q.b))
                    eP, tail = arch_eta_interval(phi, *zP, terms)
                    eQ, _ = arch_eta_interval(phi, *zQ, terms)
                    val, rad = estimate(eP + eQ - _log_delta_arch(zP, zQ))
                if rad + 2 * tail <= tol or p >= MAX_PRECISION:
                    return LocalValue(val, rad + 2 * tail, ARCH)
            except PrecisionError:
                if p >= MAX_PRECISION:
                    raise
            p *= 2
    p = v.p
    eP = escape_rate_padic_rational(phi, p, P, tol / 4)
    eQ = escape_rate_padic_rational(phi, p, Q, tol / 4)
    exact = eP.exact + eQ.exact + LogValue.of(p, valuation(wedge(P.lift, Q.lift), p))
    err = eP.error_bound + eQ.error_bound
    return LocalValue(float(exact), err, v, exact)


def orbit_green_sum_good_prime(A: AlgebraicSet, B: AlgebraicSet, p: int) -> LogValue:
    """Sum of -log delta_p over all pairs of points of A and B.

    For primitive forms the Gauss norms are 1, and the sum collapses to
    v_p(Res(A, B)) log p.
    """
    p = require_prime(p)
    R = resultant(A.form, B.form)
    if R == 0:
        raise SharedPoint("the sets share a point")
    return LogValue.of(p, valuation(R, p))


# ---------------------------------------------------------------------------
# archimedean orbit averages
# ---------------------------------------------------------------------------

_ETA_CACHE: dict = {}


def _arch_points(phi: RationalMap, part, terms: int, radius: float, prec: int):
    """Lift boxes and eta enclosures for the roots of one form (memoized)."""
    key = (phi, part, terms, radius, prec)
    hit = _ETA_CACHE.get(key)
    if hit is not None:
        return hit
    lifts, etas, tail = [], [], 0.0
    for root in complex_roots_certified(part, target_radius=radius, prec=prec):
        if root.at_infinity:
            z = (iv.mpc(1), iv.mpc(0))
        elif root.exact is not None:
            q = root.exact
            z = (_ivc(q.numerator), _ivc(q.denominator))
        else:
            z = (root.box(), iv.mpc(1))
        eta, tail = arch_eta_interval(phi, *z, terms)
        lifts.append(z)
        etas.append(eta)
    if len(_ETA_CACHE) > 512:
        _ETA_CACHE.clear()
    _ETA_CACHE[key] = (lifts, etas, tail)
    return lifts, etas, tail


class _ArchSet:
    """Certified lift boxes and eta enclosures for the points of a set."""

    def __init__(self, phi: RationalMap, Z: AlgebraicSet, terms: int, radius: float, prec: int):
        self.lifts = []
        self.etas = []
        self.tail = 0.0
        for part in Z.components():
            lifts, etas, tail = _arch_points(phi, part, terms, radius, prec)
            self.lifts += lifts
            self.etas += etas
            self.tail = max(self.tail, tail)


def _arch_green_rows(phi, Z, Porbit, tol, prec):
    """Per point sigma(Z): the enclosure of F(sigma Z) = average_Q g_inf(sigma Z, Q)."""
    if not Z.is_disjoint(Porbit):
        raise SharedPoint("Z meets the orbit set")
    terms = arch_terms_needed(phi, tol / 4)
    radius = 1e-50
    p = max(int(prec), 192)
    while True:
        try:
            with precision(p):
                zs = _ArchSet(phi, Z, terms, radius, p)
                ps = _ArchSet(phi, Porbit, terms, radius, p)
                rows = []
                for z, ez in zip(zs.lifts, zs.etas):
                    acc = iv.mpf(0)
                    for w, ew in zip(ps.lifts, ps.etas):
                        acc += ez + ew - _log_delta_arch(z, w)
                    rows.append(acc / len(ps.lifts))
                widest = max(estimate(r)[1] for r in rows)
                if widest <= tol / 4 or p >= MAX_PRECISION:
                    return rows, zs.tail + ps.tail, p
        except PrecisionError:
            if p >= MAX_PRECISION:
                raise
        radius *= 1e-20
        p *= 2


def _arch_average(phi, Z, Porbit, tol, prec, cap=None) -> LocalValue:
    rows, tail, p = _arch_green_rows(phi, Z, Porbit, tol, prec)
    with precision(p):
        total = iv.mpf(0)
        for r in rows:
            if cap is not None:
                c = iv.mpf(cap)
                if hi(r) <= lo(c):
                    pass
                elif lo(r) >= hi(c):
                    r = c
                else:
                    r = iv.mpf([min(lo(r), lo(c)), min(hi(r), hi(c))])
            total += r
        val, rad = estimate(total / len(rows))
    return LocalValue(val, rad + tail, ARCH)


def _rational_points(S: AlgebraicSet) -> list[ProjPointQ]:
    pts = S.rational_points()
    if len(pts) != S.size:
        return []
    return pts


def gamma_place(
    phi: RationalMap, Z: AlgebraicSet, Porbit: AlgebraicSet, v: Place, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> LocalValue:
    """Average of g_v over all pairs (sigma Z, tau Q), Z in ``Z``, Q in ``Porbit``."""
    R = resultant(Z.form, Porbit.form)
    if R == 0:
        raise SharedPoint("Z meets the orbit set")
    n = Z.size * Porbit.size
    if v.is_archimedean:
        return _arch_average(phi, Z, Porbit, tol, prec)
    p = v.p
    if phi.resultant % p:
        exact = orbit_green_sum_good_prime(Z, Porbit, p).scale(Fraction(1, n))
        return LocalValue(float(exact), 0.0, v, exact)
    zs, ps = _rational_points(Z), _rational_points(Porbit)
    if not zs or not ps:
        raise UnsupportedPlacePoint(
            f"p = {p} is a bad prime and the sets contain non-rational points; "
            "p-adic Green pairings of algebraic points are not supported"
        )
    exact = LogValue()
    err = 0.0
    for P in zs:
        for Q in ps:
            g = green_pair(phi, v, P, Q, tol)
            exact = exact + g.exact
            err += g.error_bound
    exact = exact.scale(Fraction(1, n))
    return LocalValue(float(exact), err / n, v, exact)


def gamma_places(phi: RationalMap, Z: AlgebraicSet, Porbit: AlgebraicSet) -> list[Place]:
    """Places where Gamma_v can be nonzero: infinity, bad primes, primes of Res(Z, P)."""
    R = resultant(Z.form, Porbit.form)
    if R == 0:
        raise SharedPoint("Z meets the orbit set")
    primes = set(bad_primes(phi)) | set(prime_factors(R))
    return [ARCH] + [Place(p) for p in sorted(primes)]


def gamma_total(
    phi: RationalMap, Z: AlgebraicSet, Porbit: AlgebraicSet, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> GreenReport:
    places = gamma_places(phi, Z, Porbit)
    share = tol / len(places)
    per: dict[Place, LocalValue] = {}
    for v in places:
        per[v] = gamma_place(phi, Z, Porbit, v, share, prec)
    exact = LogValue()
    for v, lv in per.items():
        if lv.exact is not None:
            exact = exact + lv.exact
    total = per[ARCH].value + float(exact)
    err = _fsum_bound(lv.error_bound for lv in per.values()) + 4 * math.ulp(max(abs(total), 1.0))
    return GreenReport(per, total, err, Z.size, Porbit.size)


# ---------------------------------------------------------------------------
# integrality and truncation
# ---------------------------------------------------------------------------

def s_integral_test(phi: RationalMap | None, Z: AlgebraicSet, Porbit: AlgebraicSet, S: Iterable) -> IntegralityVerdict:
    """Is Z S-integral relative to Porbit?

    A prime p outside S with p | Res(Z, P) is a witness: some conjugate
    pair reduces to the same point mod p.  ``phi`` is accepted for a
    uniform call signature; the test depends on the two sets only.
    """
    allowed = set()
    for s in S:
        pl = s if isinstance(s, Place) else Place.parse(s)
        if pl.p is not None:
            allowed.add(pl.p)
    R = resultant(Z.form, Porbit.form)
    if R == 0:
        raise SharedPoint("Z meets the orbit set")
    witnesses = sorted((p, e) for p, e in prime_factors(R).items() if p not in allowed)
    return IntegralityVerdict(not witnesses, witnesses)


def truncated_green_average(
    phi: RationalMap, Z: AlgebraicSet, Porbit: AlgebraicSet, M: float, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> LocalValue:
    """(1/|Z|) sum over sigma Z of min(F(sigma Z), M), archimedean place.

    F(R) is the average of g_inf(R, Q) over Q in ``Porbit``.
    """
    if not M > 0:
        raise ValueError("M must be positive")
    return _arch_average(phi, Z, Porbit, tol, prec, cap=M)


def green_row_values(phi: RationalMap, Z: AlgebraicSet, Porbit: AlgebraicSet, tol: float = 1e-10) -> list[float]:
    """Midpoints of F(sigma Z) for each point of Z, in root order."""
    rows, _, p = _arch_green_rows(phi, Z, Porbit, tol, DEFAULT_PRECISION)
    with precision(p):
        return [estimate(r)[0] for r in rows]
