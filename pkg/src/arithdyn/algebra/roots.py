"""Certified isolation of the complex roots of an integer form.

Approximations come from Aberth-Ehrlich simultaneous iteration.  Each one is
then certified by an exact Rouche test carried out in Gaussian-integer
arithmetic: writing f(z + w) = sum_k b_k w^k, the inequality

    |b_0| + sum_{k>=2} |b_k| r^k  <  |b_1| r

forces exactly one root of f in the disc |w| < r.  Centers are dyadic, so
every b_k is computed without rounding.  Pairwise disjoint discs, one per
degree, account for every root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from mpmath import iv, mp

from ..errors import RootCertificationError
from .forms import HomForm, _strip, squarefree_primitive_part
from .intervals import DEFAULT_PRECISION, complex_box, from_fraction, mpf_to_fraction
from .newton import lower_hull

MAX_PRECISION = 4096


@dataclass(frozen=True)
class CertifiedRoot:
    """A disc of the given radius around ``approximation`` holding exactly one root.

    ``at_infinity`` marks the root (1:0); ``exact`` is set for rational roots
    found in closed form.
    """

    approximation: object          # mpmath mpc
    radius: object                 # mpmath mpf, rigorous
    at_infinity: bool = False
    exact: Fraction | None = None

    def box(self):
        """iv.mpc rectangle containing the disc (uses the ambient iv precision)."""
        if self.at_infinity:
            raise ValueError("the root at infinity has no affine box")
        if self.exact is not None:
            x = from_fraction(self.exact)
            return iv.mpc(x, iv.mpf(0))
        return complex_box(self.approximation, self.radius)

    def lift(self):
        """Homogeneous lift as a pair of iv.mpc values: (alpha, 1) or (1, 0)."""
        one = iv.mpc(1, 0)
        if self.at_infinity:
            return (one, iv.mpc(0, 0))
        return (self.box(), one)

    @property
    def radius_float(self) -> float:
        return math.nextafter(float(self.radius), math.inf) if self.radius else 0.0

    def is_real(self) -> bool:
        if self.at_infinity or self.exact is not None:
            return True
        return abs(self.approximation.imag) <= self.radius

    def __repr__(self) -> str:
        if self.at_infinity:
            return "CertifiedRoot(inf)"
        if self.exact is not None:
            return f"CertifiedRoot({self.exact})"
        return f"CertifiedRoot({mp.nstr(self.approximation, 12)} +/- {mp.nstr(self.radius, 3)})"


# ---------------------------------------------------------------------------
# Aberth iteration
# ---------------------------------------------------------------------------

def _initial_guesses(f: list[int]) -> list:
    """Bini's starting points from the upper hull of (i, log|a_i|)."""
    n = len(f) - 1
    pts = []
    for i in range(n + 1):
        c = f[n - i]
        if c:
            pts.append((i, -Fraction(math.log(abs(c))).limit_denominator(10**12)))
    hull = lower_hull(pts)
    guesses = []
    sigma = 0.7
    for s, ((i1, y1), (i2, y2)) in enumerate(zip(hull, hull[1:])):
        k = i2 - i1
        u = mp.exp(mp.mpf(float(y2 - y1)) / k)
        for j in range(k):
            ang = 2 * mp.pi * j / k + 2 * mp.pi * s / n + sigma
            guesses.append(u * mp.expj(ang))
    return guesses


def _horner_with_derivative(f, z):
    p = mp.mpc(f[0])
    dp = mp.mpc(0)
    for c in f[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_float(f: list[int], max_iter: int = 300) -> list | None:
    """Aberth iteration in double precision; None if it overflows or stalls."""
    n = len(f) - 1
    try:
        c = [float(x) for x in f]
        z = [complex(x) for x in _initial_guesses(f)]
        for _ in range(max_iter):
            worst = 0.0
            for i in range(n):
                zi = z[i]
                p, dp = c[0], 0.0
                for a in c[1:]:
                    dp = dp * zi + p
                    p = p * zi + a
                if p == 0:
                    continue
                s = sum(1 / (zi - z[j]) for j in range(n) if j != i and z[j] != zi)
                ratio = p / dp if dp else p
                den = 1 - ratio * s
                w = ratio / den if den else ratio
                z[i] = zi - w
                worst = max(worst, abs(w) / max(1.0, abs(z[i])))
            if worst < 1e-14:
                break
        if not all(math.isfinite(x.real) and math.isfinite(x.imag) for x in z):
            return None
        return z
    except (OverflowError, ZeroDivisionError):
        return None


def _aberth(f: list[int], prec: int, start=None, max_iter: int = 500) -> list:
    """Simultaneous Aberth-Ehrlich iteration.

    Roots whose correction drops below 2^-prec (relative) are frozen.  The
    iteration also stops once the largest correction has not improved for
    a while; certification then decides whether the result is usable.
    """
    n = len(f) - 1
    with mp.workprec(prec + 32):
        z = [mp.mpc(x) for x in (start or _initial_guesses(f))]
        eps = mp.mpf(2) ** (-prec)
        active = set(range(n))
        best = mp.inf
        stale = 0
        for _ in range(max_iter):
            worst = mp.mpf(0)
            for i in sorted(active):
                p, dp = _horner_with_derivative(f, z[i])
                if p == 0:
                    active.discard(i)
                    continue
                s = mp.mpc(0)
                for j in range(n):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff == 0:
                            diff = eps
                        s += 1 / diff
                if dp == 0:
                    dp = eps
                ratio = p / dp
                den = 1 - ratio * s
                w = ratio / den if den != 0 else ratio
                z[i] -= w
                rel = abs(w) / max(1, abs(z[i]))
                if rel < eps:
                    active.discard(i)
                if rel > worst:
                    worst = rel
            if not active:
                break
            if worst < best / 2:
                best = worst
                stale = 0
            else:
                stale += 1
                if stale > 15:
                    break
        else:
            raise RootCertificationError("Aberth iteration did not converge")
        return z


# ---------------------------------------------------------------------------
# exact Rouche certification
# ---------------------------------------------------------------------------

def _dyadic(x) -> tuple[int, int]:
    """mpf -> (m, e) with value m * 2**e exactly."""
    sign, man, exp, _ = (x if hasattr(x, "_mpf_") else mp.mpf(x))._mpf_
    return (-int(man) if sign else int(man)), int(exp)


def _taylor_gaussian(f: list[int], X: int, Y: int, E: int) -> list[tuple[int, int]]:
    """Coefficients of T(w) = 2^(E n) f((Z + w)/2^E), Z = X + iY, ascending in w."""
    n = len(f) - 1
    h = [(f[0], 0)]
    for j in range(1, n + 1):
        new = [(0, 0)] * (len(h) + 1)
        for k, (hr, hi_) in enumerate(h):
            nr, ni = new[k]
            new[k] = (nr + hr * X - hi_ * Y, ni + hr * Y + hi_ * X)
            nr, ni = new[k + 1]
            new[k + 1] = (nr + hr, ni + hi_)
        cr, ci = new[0]
        new[0] = (cr + f[j] * (1 << (E * j)), ci)
        h = new
    return h


def _sqrt_bounds(n: int) -> tuple[int, int]:
    s = isqrt(n)
    return s, (s if s * s == n else s + 1)


def _pellet_one_root(B: list[tuple[int, int]], t: int) -> bool:
    """Exact check that T has exactly one root in |w| < 2^t."""
    mags = [_sqrt_bounds(br * br + bi * bi) for br, bi in B]
    n = len(B) - 1
    # compare sum_{k != 1} U_k 2^(t k) < L_1 2^t, scaled by 2^(-t*n) when t < 0
    if t >= 0:
        lhs = sum(mags[k][1] << (t * k) for k in range(n + 1) if k != 1)
        rhs = mags[1][0] << t
    else:
        s = -t
        lhs = sum(mags[k][1] << (s * (n - k)) for k in range(n + 1) if k != 1)
        rhs = mags[1][0] << (s * (n - 1))
    return lhs < rhs


def _certify_one(f: list[int], z, prec: int) -> object | None:
    """Return a certified radius (mpf, power of two) around z, or None."""
    z = mp.mpc(z)
    mx, ex = _dyadic(z.real)
    my, ey = _dyadic(z.imag)
    if mx == 0:
        ex = ey
    if my == 0:
        ey = ex
    e = min(ex, ey)
    X = mx << (ex - e)
    Y = my << (ey - e)
    E = -e
    if E < 0:
        X <<= -E
        Y <<= -E
        E = 0
    B = _taylor_gaussian(f, X, Y, E)
    mag1 = isqrt(B[1][0] ** 2 + B[1][1] ** 2)
    if mag1 == 0:
        return None
    mag0 = isqrt(B[0][0] ** 2 + B[0][1] ** 2) + 1
    # Newton step size in w units, as a power of two
    if B[0] == (0, 0):
        t0 = (abs(X) + abs(Y) + 1).bit_length() - prec
    else:
        t0 = mag0.bit_length() - mag1.bit_length()
    for t in range(t0, t0 + 8):
        if _pellet_one_root(B, t):
            return mp.ldexp(mp.mpf(1), t - E)
    return None


def _discs_disjoint(centers, radii) -> bool:
    cs = [(mpf_to_fraction(mp.mpc(c).real), mpf_to_fraction(mp.mpc(c).imag)) for c in centers]
    rs = [mpf_to_fraction(r) for r in radii]
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            dx = cs[i][0] - cs[j][0]
            dy = cs[i][1] - cs[j][1]
            s = rs[i] + rs[j]
            if dx * dx + dy * dy <= s * s:
                return False
    return True


def _exact_root(q: Fraction) -> CertifiedRoot:
    with mp.workprec(max(mp.prec, 128)):
        approx = mp.mpf(q.numerator) / q.denominator
        err = abs(mpf_to_fraction(approx) - q)
        radius = mp.mpf(0) if err == 0 else mp.ldexp(mp.mpf(1), err.numerator.bit_length() - err.denominator.bit_length() + 1)
        return CertifiedRoot(mp.mpc(approx), radius, exact=q)


@lru_cache(maxsize=4096)
def _certified_affine_roots(f: tuple[int, ...], target_radius: float, prec: int) -> tuple:
    f = list(f)
    n = len(f) - 1
    target = mp.mpf(target_radius)
    start = _aberth_float(f)
    p = prec
    while p <= MAX_PRECISION:
        try:
            approx = _aberth(f, p, start)
        except RootCertificationError:
            start, p = None, 2 * p
            continue
        with mp.workprec(p + 32):
            radii = [_certify_one(f, z, p) for z in approx]
            ok = (
                all(r is not None for r in radii)
                and all(r <= target for r in radii)
                and _discs_disjoint(approx, radii)
            )
            if ok:
                return tuple(CertifiedRoot(mp.mpc(z), r) for z, r in zip(approx, radii))
        start = approx
        p *= 2
    raise RootCertificationError(f"could not certify roots of a degree {n} polynomial")


def complex_roots_certified(
    a: HomForm, target_radius: float = 1e-30, prec: int = DEFAULT_PRECISION
) -> list[CertifiedRoot]:
    """All distinct projective roots of ``a`` as certified discs.

    The root (1:0) is reported as an exact marker, and rational roots of
    linear factors found directly (degree one, or the root 0) are exact.
    Multiple roots are reported once.
    """
    if a.is_zero:
        raise ValueError("zero form")
    if not target_radius > 0:
        raise ValueError("target_radius must be positive")
    sf = squarefree_primitive_part(a)
    out: list[CertifiedRoot] = []
    if sf.infinity_multiplicity():
        out.append(CertifiedRoot(mp.mpc(mp.inf), mp.mpf(0), at_infinity=True))
    f = _strip(sf.affine())
    if f and f[-1] == 0:
        out.append(_exact_root(Fraction(0)))
        f = f[:-1]
    n = len(f) - 1
    if n == 1:
        out.append(_exact_root(Fraction(-f[1], f[0])))
    elif n >= 2:
        out.extend(_certified_affine_roots(tuple(f), float(target_radius), int(prec)))
    return out
