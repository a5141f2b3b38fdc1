"""Fatou certificates: attracting cycles, basin membership and per-place reports.

An archimedean certificate for a cycle c_0 -> ... -> c_{k-1} is a square D
around c_0 in a chart (z, or 1/z near infinity) such that interval
arithmetic shows phi^k(D) inside D and |(phi^k)'| <= q < 1 on D.  Then
phi^k is a contraction of D, every orbit entering D is attracted to the
cycle, and D lies in the Fatou set.  Nothing here ever claims that a point
is in a Julia set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv, mp

from .algebra.forms import HomForm
from .algebra.intervals import complex_box, hi, lo, precision, upper_float
from .algebra.points import ProjPointQ
from .algebra.roots import CertifiedRoot, complex_roots_certified
from .algebra.integers import primes_up_to
from .dynamics import AlgebraicSet, RationalMap, bad_primes, preperiodicity_set
from .errors import RootCertificationError
from .places import ARCH, Place

CERTIFIED = "certified-fatou"
NOT_CERTIFIED = "not-certified"

WORK_PRECISION = 192
DEFAULT_BUDGET = 200


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicPoint:
    """A periodic point: exact when rational, otherwise a certified disc."""

    rational: ProjPointQ | None = None
    root: CertifiedRoot | None = None

    @property
    def is_infinity(self) -> bool:
        return self.rational is not None and self.rational.is_infinity

    def center(self):
        """mp.mpc approximation (None for the point at infinity)."""
        if self.rational is not None:
            if self.rational.is_infinity:
                return None
            return mp.mpc(mp.mpf(self.rational.a) / self.rational.b)
        return mp.mpc(self.root.approximation)

    def to_json(self) -> dict:
        if self.rational is not None:
            return {"exact": self.rational.to_json()}
        c = self.center()
        return {"real": mp.nstr(c.real, 30), "imag": mp.nstr(c.imag, 30), "radius": mp.nstr(self.root.radius, 5)}


@dataclass
class Cycle:
    period: int
    points: list[PeriodicPoint]
    multiplier: complex
    multiplier_abs_upper: float
    exact_multiplier: Fraction | None = None

    @property
    def is_attracting(self) -> bool:
        return self.multiplier_abs_upper < 1

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "points": [p.to_json() for p in self.points],
            "multiplier": [repr(self.multiplier.real), repr(self.multiplier.imag)],
            "multiplier_abs_upper": repr(self.multiplier_abs_upper),
            "exact_multiplier": None if self.exact_multiplier is None else str(self.exact_multiplier),
        }


def _exact_cycle_multiplier(phi: RationalMap, pts: list[ProjPointQ]) -> Fraction:
    """prod det DF(z_i) / (d^k prod lambda_i^2), where F(z_i) = lambda_i z_{i+1}."""
    (F0, F1), (G0, G1) = phi.F.partials(), phi.G.partials()
    d = phi.degree
    k = len(pts)
    num = Fraction(1)
    for i, P in enumerate(pts):
        a, b = P.lift
        nxt = pts[(i + 1) % k]
        A, B = phi.F(a, b), phi.G(a, b)
        lam = Fraction(A, nxt.a) if nxt.a else Fraction(B, nxt.b)
        det = F0(a, b) * G1(a, b) - F1(a, b) * G0(a, b)
        num *= Fraction(det) / (lam * lam)
    return num / d ** k


def _affine_derivative(phi: RationalMap):
    """Callable x -> phi'(x) in the affine chart (works on intervals)."""
    (F0, _), (G0, _) = phi.F.partials(), phi.G.partials()

    def deriv(x):
        one = iv.mpc(1)
        A, B = phi.F(x, one), phi.G(x, one)
        return (F0(x, one) * B - A * G0(x, one)) / (B * B)

    return deriv


def _boxes_overlap(a, b) -> bool:
    return not (
        hi(a.real) < lo(b.real) or hi(b.real) < lo(a.real) or hi(a.imag) < lo(b.imag) or hi(b.imag) < lo(a.imag)
    )


def _group_cycles(phi: RationalMap, roots: list[CertifiedRoot]) -> list[list[int]] | None:
    """Follow phi on certified discs; None when an image is ambiguous."""
    boxes = [r.box() for r in roots]
    succ = []
    one = iv.mpc(1)
    for bx in boxes:
        A, B = phi.F(bx, one), phi.G(bx, one)
        if lo(B.real ** 2 + B.imag ** 2) <= 0:
            return None
        img = A / B
        hits = [j for j, other in enumerate(boxes) if _boxes_overlap(img, other)]
        if len(hits) != 1:
            return None
        succ.append(hits[0])
    cycles, done = [], set()
    for i in range(len(roots)):
        if i in done:
            continue
        cyc = [i]
        j = succ[i]
        while j != i:
            if j in done or j in cyc:
                return None
            cyc.append(j)
            j = succ[j]
        done.update(cyc)
        cycles.append(cyc)
    return cycles


def periodic_cycles_arch(phi: RationalMap, max_period: int, tol: float = 1e-30) -> list[Cycle]:
    """All cycles of exact period k <= max_period, with their multipliers."""
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    out: list[Cycle] = []
    seen = AlgebraicSet.empty()
    deriv = _affine_derivative(phi)
    for k in range(1, max_period + 1):
        S = preperiodicity_set(phi, k, 0).minus(seen)
        seen = seen.union(S)
        if S.is_empty:
            continue
        rats = S.rational_points()
        done: set[ProjPointQ] = set()
        for P in rats:
            if P in done:
                continue
            orbit = [P]
            Q = phi(P)
            while Q != P:
                orbit.append(Q)
                Q = phi(Q)
            done.update(orbit)
            lam = _exact_cycle_multiplier(phi, orbit)
            out.append(Cycle(k, [PeriodicPoint(rational=x) for x in orbit], complex(float(lam), 0.0), float(abs(lam)), lam))
        rest = S.minus(AlgebraicSet.from_points(rats)) if rats else S
        if rest.is_empty:
            continue
        radius = min(tol, 1e-30)
        prec = WORK_PRECISION
        for _ in range(6):
            with precision(prec):
                roots = complex_roots_certified(rest.form, target_radius=radius, prec=prec)
                groups = _group_cycles(phi, roots)
                if groups is not None:
                    for g in groups:
                        m = iv.mpc(1)
                        for i in g:
                            m = m * deriv(roots[i].box())
                        mid = complex(float((lo(m.real) + hi(m.real)) / 2), float((lo(m.imag) + hi(m.imag)) / 2))
                        upper = upper_float(iv.sqrt(m.real ** 2 + m.imag ** 2))
                        out.append(Cycle(k, [PeriodicPoint(root=roots[i]) for i in g], mid, upper))
                    break
            radius *= 1e-20
            prec *= 2
        else:
            raise RootCertificationError(f"could not separate the period-{k} cycles")
    return out


def attracting_cycles_arch(phi: RationalMap, max_period: int = 2, tol: float = 1e-30) -> list[Cycle]:
    return [c for c in periodic_cycles_arch(phi, max_period, tol) if c.is_attracting]


# ---------------------------------------------------------------------------
# charts and certified contraction discs
# ---------------------------------------------------------------------------

def _chart_for(pt: PeriodicPoint) -> str:
    c = pt.center()
    if c is None or abs(c) > 1:
        return "inverted"
    return "affine"


def _chart_center(pt: PeriodicPoint, chart: str):
    c = pt.center()
    if chart == "affine":
        return c
    return mp.mpc(0) if c is None else 1 / c


def _chart_step(phi: RationalMap, x, src: str, dst: str):
    """Image box and derivative box of phi from chart ``src`` to chart ``dst``."""
    (F0, F1), (G0, G1) = phi.F.partials(), phi.G.partials()
    one = iv.mpc(1)
    if src == "affine":
        z0, z1 = x, one
        dA, dB = F0(z0, z1), G0(z0, z1)
    else:
        z0, z1 = one, x
        dA, dB = F1(z0, z1), G1(z0, z1)
    A, B = phi.F(z0, z1), phi.G(z0, z1)
    if dst == "affine":
        num, den, dnum, dden = A, B, dA, dB
    else:
        num, den, dnum, dden = B, A, dB, dA
    if not lo(den.real ** 2 + den.imag ** 2) > 0:
        return None, None
    return num / den, (dnum * den - num * dden) / (den * den)


def _box_inside(inner, outer) -> bool:
    return (
        lo(inner.real) > lo(outer.real)
        and hi(inner.real) < hi(outer.real)
        and lo(inner.imag) > lo(outer.imag)
        and hi(inner.imag) < hi(outer.imag)
    )


def _check_square(phi: RationalMap, charts: list[str], center, radius):
    """(image inside, q upper bound) for the square of half-side ``radius``."""
    D = complex_box(center, radius)
    box = D
    q = iv.mpf(1)
    k = len(charts)
    for i in range(k):
        img, der = _chart_step(phi, box, charts[i], charts[(i + 1) % k])
        if img is None:
            return False, math.inf
        q = q * iv.sqrt(der.real ** 2 + der.imag ** 2)
        box = img
    return _box_inside(box, D), upper_float(q)


@dataclass
class BasinCertificate:
    """Machine-checkable evidence that an orbit enters a contracting square.

    The square has center ``center`` and half-side ``radius`` in chart
    ``charts[0]``; ``charts`` lists the chart used at each point of the
    cycle, and ``contraction`` bounds |(phi^k)'| on the square.  The orbit
    point with index ``landing_index`` lies inside the square.
    """

    cycle: Cycle
    charts: list[str]
    center: tuple[str, str]
    radius: str
    contraction: float
    landing_index: int
    start: ProjPointQ

    def to_json(self) -> dict:
        return {
            "cycle": self.cycle.to_json(),
            "charts": self.charts,
            "center": list(self.center),
            "radius": self.radius,
            "contraction": repr(self.contraction),
            "landing_index": self.landing_index,
            "start": self.start.to_json(),
        }


@dataclass
class _Square:
    cycle: Cycle
    charts: list[str]
    center: object
    radius: object
    q: float
    box: object = None


def _contracting_square(phi: RationalMap, cycle: Cycle, shift: int) -> _Square | None:
    pts = cycle.points[shift:] + cycle.points[:shift]
    charts = [_chart_for(p) for p in pts]
    center = _chart_center(pts[0], charts[0])
    r = mp.mpf(1) / 4
    for _ in range(40):
        inside, q = _check_square(phi, charts, center, r)
        if inside and q < 1:
            rotated = Cycle(cycle.period, pts, cycle.multiplier, cycle.multiplier_abs_upper, cycle.exact_multiplier)
            return _Square(rotated, charts, center, r, q, complex_box(center, r))
        r /= 2
    return None


def _chart_coordinate(u0, u1, chart: str):
    num, den = (u0, u1) if chart == "affine" else (u1, u0)
    if not lo(den.real ** 2 + den.imag ** 2) > 0:
        return None
    return num / den


def _normalize(u0, u1):
    m0 = hi(u0.real ** 2 + u0.imag ** 2)
    m1 = hi(u1.real ** 2 + u1.imag ** 2)
    m = u0 if m0 >= m1 else u1
    c = mp.mpc((lo(m.real) + hi(m.real)) / 2, (lo(m.imag) + hi(m.imag)) / 2)
    s = 1 / c
    s = iv.mpc(iv.mpf(s.real), iv.mpf(s.imag))
    return u0 * s, u1 * s


def _orbit_boxes(phi: RationalMap, P: ProjPointQ, budget: int):
    """Yield (index, lift box) along the orbit; exact while heights stay small."""
    Q = P
    j = 0
    while j <= budget and Q.height_bits() < 512:
        yield j, (iv.mpc(iv.mpf(Q.a)), iv.mpc(iv.mpf(Q.b)))
        Q = phi(Q)
        j += 1
    u0, u1 = _normalize(iv.mpc(iv.mpf(Q.a)), iv.mpc(iv.mpf(Q.b)))
    while j <= budget:
        yield j, (u0, u1)
        u0, u1 = _normalize(phi.F(u0, u1), phi.G(u0, u1))
        j += 1


def basin_certificate_arch(
    phi: RationalMap, P: ProjPointQ, tol: float = 1e-30, budget: int = DEFAULT_BUDGET, max_period: int = 2
) -> BasinCertificate | None:
    """A certificate that P is attracted to an attracting cycle, or None."""
    with precision(WORK_PRECISION):
        squares = []
        for cyc in attracting_cycles_arch(phi, max_period, tol):
            for s in range(cyc.period):
                sq = _contracting_square(phi, cyc, s)
                if sq is not None:
                    squares.append(sq)
        if not squares:
            return None
        for j, (u0, u1) in _orbit_boxes(phi, P, budget):
            for sq in squares:
                x = _chart_coordinate(u0, u1, sq.charts[0])
                if x is not None and _box_inside(x, sq.box):
                    return BasinCertificate(
                        sq.cycle,
                        sq.charts,
                        (mp.nstr(sq.center.real, 40), mp.nstr(sq.center.imag, 40)),
                        mp.nstr(sq.radius, 40),
                        sq.q,
                        j,
                        P,
                    )
    return None


def verify_basin_certificate(phi: RationalMap, cert: BasinCertificate) -> bool:
    """Re-check a certificate from its recorded evidence alone."""
    with precision(WORK_PRECISION):
        center = mp.mpc(mp.mpf(cert.center[0]), mp.mpf(cert.center[1]))
        radius = mp.mpf(cert.radius)
        if len(cert.charts) != cert.cycle.period:
            return False
        inside, q = _check_square(phi, cert.charts, center, radius)
        if not (inside and q < 1):
            return False
        D = complex_box(center, radius)
        for j, (u0, u1) in _orbit_boxes(phi, cert.start, cert.landing_index):
            if j == cert.landing_index:
                x = _chart_coordinate(u0, u1, cert.charts[0])
                return x is not None and _box_inside(x, D)
    return False


# ---------------------------------------------------------------------------
# per-place report
# ---------------------------------------------------------------------------

@dataclass
class FatouReport:
    per_place: dict[Place, str] = field(default_factory=dict)
    evidence: dict[Place, dict] = field(default_factory=dict)

    def status(self, v) -> str:
        return self.per_place[v if isinstance(v, Place) else Place.parse(v)]

    def to_json(self) -> dict:
        keys = sorted(self.per_place, key=lambda v: (0, 0) if v.p is None else (1, v.p))
        return {
            "per_place": {v.key: self.per_place[v] for v in keys},
            "evidence": {v.key: self.evidence[v] for v in keys},
        }


def totally_fatou_report(
    phi: RationalMap, P: ProjPointQ, prime_budget: int = 50, budget: int = DEFAULT_BUDGET
) -> FatouReport:
    """Fatou status of P at the archimedean place and at every prime up to ``prime_budget``.

    Bad primes are always listed.  A good-reduction prime certifies every
    point; bad primes are reported as not certified.
    """
    report = FatouReport()
    cert = basin_certificate_arch(phi, P, budget=budget)
    if cert is not None:
        report.per_place[ARCH] = CERTIFIED
        report.evidence[ARCH] = cert.to_json()
    else:
        report.per_place[ARCH] = NOT_CERTIFIED
        report.evidence[ARCH] = {"reason": f"orbit did not enter a certified contraction square within {budget} steps"}
    bad = set(bad_primes(phi))
    for p in sorted(set(primes_up_to(prime_budget)) | bad):
        v = Place(p)
        if p in bad:
            report.per_place[v] = NOT_CERTIFIED
            report.evidence[v] = {"reason": f"bad reduction: {p} divides Res(F, G) = {phi.resultant}"}
        else:
            report.per_place[v] = CERTIFIED
            report.evidence[v] = {"good_reduction": True, "resultant_residue": phi.resultant % p}
    return report
