"""Weil heights, local escape rates and canonical heights by two routes.

The archimedean escape rate is summed as

    G(z) = log||z|| + sum_k d^-(k+1) l(u_k),   l(u) = log||F(u)|| - d log||u||,

with u_0 = z and u_{k+1} = F(u_k) rescaled.  l is invariant under scaling, so
u_k can be rescaled freely; we divide by an approximation of its larger
coordinate, which keeps every number near the unit polydisc.  |l| <= C_inf,
so stopping after K terms costs at most C_inf / (d^K (d - 1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from mpmath import iv, mp

from .algebra.forms import HomForm
from .algebra.integers import valuation
from .algebra.intervals import (
    DEFAULT_PRECISION,
    estimate,
    from_fraction,
    hi,
    lo,
    precision,
)
from .algebra.points import ProjPointQ
from .algebra.roots import MAX_PRECISION, complex_roots_certified
from .dynamics import AlgebraicSet, RationalMap, bad_primes, height_constants
from .errors import PrecisionError
from .places import ARCH, LogValue, Place

# exact integer iteration until coefficients reach this many bits
EXACT_BITS = 4096


@dataclass(frozen=True)
class EscapeRateResult:
    """Value of a local escape rate with a rigorous error bound.

    For p-adic places ``exact`` carries the value as a rational multiple of
    log p; it is the whole value when ``error_bound`` is 0 and the partial
    sum otherwise.
    """

    value: float
    error_bound: float
    place: Place
    exact: LogValue | None = None
    terms: int = 0

    def to_json(self) -> dict:
        out = {"place": self.place.key, "value": repr(self.value), "error_bound": repr(self.error_bound), "terms": self.terms}
        if self.exact is not None:
            out["exact"] = self.exact.to_json()
        return out


@dataclass(frozen=True)
class CanonicalHeightResult:
    value: float
    error_bound: float
    method: str                      # "limit" or "local-sum"
    details: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "value": repr(self.value),
            "error_bound": repr(self.error_bound),
            "method": self.method,
            "details": self.details,
        }


# ---------------------------------------------------------------------------
# Weil heights
# ---------------------------------------------------------------------------

def weil_height_point(P: ProjPointQ) -> float:
    return math.log(max(abs(P.a), abs(P.b)))


def weil_height_set(Z: AlgebraicSet, tol: float = 1e-12, prec: int = DEFAULT_PRECISION) -> float:
    """Average Weil height of the points of Z.

    The form is primitive, so every p-adic Gauss norm is 1 and the height is
    (1/N) log of the archimedean Mahler measure of the form.
    """
    if Z.is_empty:
        raise ValueError("empty set")
    form = Z.form
    aff = form.affine()
    with precision(prec):
        total = iv.log(iv.mpf(abs(aff[0])))
        for root in complex_roots_certified(form, target_radius=min(tol, 1e-20), prec=prec):
            if root.at_infinity:
                continue
            m = _upper_abs(root.box())
            if lo(m) > 1:
                total += iv.log(m)
            elif hi(m) > 1:
                total += iv.mpf([0, hi(iv.log(iv.mpf(hi(m))))])
        value, rad = estimate(total / Z.size)
    if rad > tol:
        raise PrecisionError(f"height of set only known to {rad:.3g}")
    return value


def _upper_abs(z):
    return iv.sqrt(z.real ** 2 + z.imag ** 2)


# ---------------------------------------------------------------------------
# archimedean escape rate
# ---------------------------------------------------------------------------

def _ivc(x):
    if isinstance(x, iv.mpc):
        return x
    if isinstance(x, iv.mpf):
        return iv.mpc(x, iv.mpf(0))
    if isinstance(x, Fraction):
        return iv.mpc(from_fraction(x), iv.mpf(0))
    if isinstance(x, int):
        return iv.mpc(iv.mpf(x), iv.mpf(0))
    if isinstance(x, (complex, type(mp.mpc(0)))):
        return iv.mpc(iv.mpf(mp.mpf(x.real)), iv.mpf(mp.mpf(x.imag)))
    return iv.mpc(iv.mpf(x), iv.mpf(0))


def _norm2(u0, u1):
    return u0.real ** 2 + u0.imag ** 2 + u1.real ** 2 + u1.imag ** 2


def _mid(z):
    c = z.real
    d = z.imag
    return mp.mpc((lo(c) + hi(c)) / 2, (lo(d) + hi(d)) / 2)


def _rescale(u0, u1):
    """Divide a lift by a point approximation of its larger coordinate."""
    m0, m1 = _mid(u0), _mid(u1)
    m = m0 if abs(m0) >= abs(m1) else m1
    if m == 0:
        raise PrecisionError("lift box contains the origin")
    s = iv.mpc(1) / iv.mpc(iv.mpf(m.real), iv.mpf(m.imag))
    s = iv.mpc(iv.mpf(_mid(s).real), iv.mpf(_mid(s).imag))
    return u0 * s, u1 * s


def _positive_log(x):
    if not lo(x) > 0:
        raise PrecisionError("norm enclosure reaches zero; precision too low")
    return iv.log(x)


def arch_terms_needed(phi: RationalMap, tol: float) -> int:
    hc = height_constants(phi)
    d = phi.degree
    if hc.arch_bound == 0:
        return 0
    return max(0, math.ceil(math.log(2 * hc.arch_bound / ((d - 1) * tol), d)))


def arch_eta_interval(phi: RationalMap, z0, z1, terms: int):
    """Enclosure of sum_{k<terms} d^-(k+1) l(u_k), with the tail bound as a float.

    The tail is not included; the caller widens by ``tail``.  Runs at the
    ambient interval precision.
    """
    d = phi.degree
    F, G = phi.F, phi.G
    u0, u1 = _rescale(_ivc(z0), _ivc(z1))
    total = iv.mpf(0)
    scale = iv.mpf(1)
    for _ in range(terms):
        w0, w1 = F(u0, u1), G(u0, u1)
        term = (_positive_log(_norm2(w0, w1)) - d * _positive_log(_norm2(u0, u1))) / 2
        scale = scale / d
        total += term * scale
        u0, u1 = _rescale(w0, w1)
    tail = height_constants(phi).arch_bound / (d ** terms * (d - 1))
    return total, tail


def arch_log_norm(z0, z1):
    return _positive_log(_norm2(_ivc(z0), _ivc(z1))) / 2


def escape_rate_arch(
    phi: RationalMap, lift, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> EscapeRateResult:
    """G_inf at a lift in C^2 (Euclidean norm), to within ``tol``."""
    z0, z1 = lift
    terms = arch_terms_needed(phi, tol)
    p = max(int(prec), 64)
    while True:
        try:
            with precision(p):
                eta, tail = arch_eta_interval(phi, z0, z1, terms)
                val, rad = estimate(arch_log_norm(z0, z1) + eta)
            if rad + tail <= tol:
                return EscapeRateResult(val, rad + tail, ARCH, terms=terms)
        except PrecisionError:
            pass
        if p >= MAX_PRECISION:
            raise PrecisionError(f"tolerance {tol} unreachable up to {MAX_PRECISION} bits")
        p *= 2


# ---------------------------------------------------------------------------
# p-adic escape rate at rational points
# ---------------------------------------------------------------------------

def _padic_drop(F: HomForm, G: HomForm, a: int, b: int, p: int) -> int:
    return min(valuation(F(a, b), p), valuation(G(a, b), p))


def padic_terms_needed(phi: RationalMap, p: int, tol: float) -> int:
    r = valuation(phi.resultant, p)
    d = phi.degree
    if r == 0:
        return 0
    return max(1, math.ceil(math.log(2 * r * math.log(p) / ((d - 1) * tol), d)))


def padic_escape_exact(phi: RationalMap, p: int, P: ProjPointQ, tol: float = 1e-12) -> tuple[Fraction, Fraction]:
    """(s, t) with G_p(coprime lift of P) = -(s +/- t) log p, s and t exact.

    t = 0 when the rational orbit of P is seen to cycle, which makes the
    drop sequence eventually periodic and the series a geometric one.
    Otherwise the drops are followed modulo a power of p for enough steps
    and t = v_p(Res) / (d^K (d - 1)).
    """
    d = phi.degree
    r = valuation(phi.resultant, p)
    if r == 0:
        return Fraction(0), Fraction(0)
    F, G = phi.F, phi.G
    K = padic_terms_needed(phi, p, tol)
    drops: list[int] = []
    seen: dict[ProjPointQ, int] = {}
    Q = P
    # exact rational orbit while it stays small
    while len(drops) < K and Q.height_bits() < EXACT_BITS:
        if Q in seen:
            start = seen[Q]
            head = sum((Fraction(e, d ** (k + 1)) for k, e in enumerate(drops[:start])), Fraction(0))
            cyc = drops[start:]
            L = len(cyc)
            body = sum((Fraction(e, d ** (start + j + 1)) for j, e in enumerate(cyc)), Fraction(0))
            return head + body / (1 - Fraction(1, d ** L)), Fraction(0)
        seen[Q] = len(drops)
        a, b = Q.lift
        drops.append(_padic_drop(F, G, a, b, p))
        Q = ProjPointQ(F(a, b), G(a, b))
    if len(drops) < K:
        # continue modulo p^N; each step loses at most r digits of precision
        remaining = K - len(drops)
        N = r * remaining + r + 1
        mod = p ** N
        a, b = Q.lift
        a, b = a % mod, b % mod
        for _ in range(remaining):
            A, B = F(a, b) % mod, G(a, b) % mod
            e = min(valuation(A, p) if A else N, valuation(B, p) if B else N)
            if e > r:
                raise AssertionError("valuation drop exceeds v_p(Res)")
            drops.append(e)
            # A / p^e is known modulo p^(N - e); keep p^(N - r) for uniformity
            N -= r
            mod = p ** N
            a, b = (A // p ** e) % mod, (B // p ** e) % mod
    s = sum((Fraction(e, d ** (k + 1)) for k, e in enumerate(drops)), Fraction(0))
    t = Fraction(r, d ** len(drops) * (d - 1))
    return s, t


def escape_rate_padic_rational(phi: RationalMap, p: int, P: ProjPointQ, tol: float = 1e-12) -> EscapeRateResult:
    """G_p at the coprime integer lift of P, as an exact multiple of log p."""
    place = Place(p)
    if phi.resultant % p:
        return EscapeRateResult(0.0, 0.0, place, exact=LogValue(), terms=0)
    s, t = padic_escape_exact(phi, place.p, P, tol)
    value = LogValue.of(p, -s)
    err = float(t) * math.log(p)
    if err:
        err = math.nextafter(err * (1 + 1e-12), math.inf)
    return EscapeRateResult(float(value), err, place, exact=value, terms=0)


# ---------------------------------------------------------------------------
# canonical heights
# ---------------------------------------------------------------------------

def limit_steps_needed(phi: RationalMap, tol: float) -> int:
    C = height_constants(phi).global_bound
    d = phi.degree
    if C == 0:
        return 0
    return max(0, math.ceil(math.log(2 * C / ((d - 1) * tol), d)))


def canonical_height_limit(
    phi: RationalMap, P: ProjPointQ, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> CanonicalHeightResult:
    """h(phi^n P) / d^n with n large enough that the telescoping bound is below tol/2.

    The iterates are kept exactly while small.  After that only the size of
    the coprime lift matters: it is followed by interval arithmetic, and the
    common factor removed at each step, a divisor of Res, is computed exactly
    from the lift's residues modulo a power of Res.
    """
    d = phi.degree
    C = height_constants(phi).global_bound
    n = limit_steps_needed(phi, tol)
    F, G = phi.F, phi.G
    a, b = P.lift
    k = 0
    while k < n and max(abs(a), abs(b)).bit_length() < EXACT_BITS:
        A, B = F(a, b), G(a, b)
        g = gcd(A, B)
        a, b = A // g, B // g
        k += 1
    bound = C / (d ** n * (d - 1)) if n else 0.0
    if k == n:
        with precision(max(int(prec), 64)):
            h = iv.log(iv.mpf(max(abs(a), abs(b)))) / iv.mpf(d) ** n
            val, rad = estimate(h)
        return CanonicalHeightResult(val, rad + bound, "limit", {"steps": n, "exact_steps": k})
    R = abs(phi.resultant)
    p = max(int(prec), 64)
    while True:
        try:
            val, rad = _limit_interval_phase(F, G, d, a, b, n - k, n, R, p)
            if rad <= tol / 4 or p >= MAX_PRECISION:
                return CanonicalHeightResult(
                    val, rad + bound, "limit", {"steps": n, "exact_steps": k, "precision": p}
                )
        except PrecisionError:
            if p >= MAX_PRECISION:
                raise
        p *= 2


def _limit_interval_phase(F, G, d, a, b, steps, n, R, prec):
    mod = R ** (steps + 1)
    ra, rb = a % mod, b % mod
    with precision(prec):
        ia, ib = iv.mpf(a), iv.mpf(b)
        for _ in range(steps):
            A, B = F(ra, rb) % mod, G(ra, rb) % mod
            g = gcd(gcd(A % R, B % R), R) if R > 1 else 1
            mod //= R
            ra, rb = (A // g) % mod, (B // g) % mod
            ia, ib = F(ia, ib) / g, G(ia, ib) / g
        m = iv.mpf([max(_abs_lo(ia), _abs_lo(ib)), max(_abs_hi(ia), _abs_hi(ib))])
        h = _positive_log(m) / iv.mpf(d) ** n
        return estimate(h)


def _abs_lo(x):
    a, b = lo(x), hi(x)
    if a > 0:
        return a
    if b < 0:
        return -b
    return mp.mpf(0)


def _abs_hi(x):
    return max(abs(lo(x)), abs(hi(x)))


def canonical_height_local(
    phi: RationalMap, P: ProjPointQ, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> CanonicalHeightResult:
    """G_inf(lift) + sum over bad primes of G_p(lift), for the coprime integer lift."""
    a, b = P.lift
    bad = bad_primes(phi)
    share = tol / (2 * (len(bad) + 1))
    arch = escape_rate_arch(phi, (a, b), tol=share, prec=prec)
    value = arch.value
    err = arch.error_bound
    parts = {"inf": arch.to_json()}
    exact = LogValue()
    for p in bad:
        er = escape_rate_padic_rational(phi, p, P, tol=share)
        exact = exact + er.exact
        err += er.error_bound
        parts[str(p)] = er.to_json()
    value += float(exact)
    err += 4 * math.ulp(max(abs(value), 1.0))
    return CanonicalHeightResult(value, err, "local-sum", {"places": parts})


def canonical_height(phi: RationalMap, P: ProjPointQ, tol: float = 1e-10) -> CanonicalHeightResult:
    return canonical_height_limit(phi, P, tol)
