"""Rational maps over Q as pairs of binary forms, their iterates and orbits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Sequence

from .algebra.forms import (
    HomForm,
    exact_div,
    form_gcd,
    resultant,
    resultant_cofactors,
    squarefree_primitive_part,
)
from .algebra.integers import divisors, prime_factors
from .algebra.intervals import mpf_to_fraction
from .algebra.points import ProjPointQ
from .algebra.roots import complex_roots_certified
from .errors import BudgetExceeded, DegenerateMap, DegreeMismatch, DegreeTooSmall, ZeroForm

# roughly 10**6 decimal digits
DEFAULT_MAX_BITS = 3_321_929


def _log_up(n: int) -> float:
    """An upper bound for log(n), n >= 1."""
    return math.log(n) * (1 + 1e-12) + 1e-12


def _log_down(n: int) -> float:
    return math.log(n) * (1 - 1e-12) - 1e-12


@dataclass(frozen=True)
class RationalMap:
    """phi = (F : G) with F, G forms of a common degree d >= 2, Res(F, G) != 0."""

    F: HomForm
    G: HomForm

    def __post_init__(self):
        if self.F.degree != self.G.degree:
            raise DegreeMismatch(f"deg F = {self.F.degree} but deg G = {self.G.degree}")
        if self.F.degree < 2:
            raise DegreeTooSmall(f"degree {self.F.degree} < 2")
        if resultant(self.F, self.G) == 0 if not (self.F.is_zero or self.G.is_zero) else True:
            raise DegenerateMap("F and G share a projective root")
        if gcd(self.F.content(), self.G.content()) != 1:
            raise ValueError("forms are not jointly primitive; use validate_map")

    @classmethod
    def from_affine(cls, num: Sequence[int], den: Sequence[int]) -> "RationalMap":
        """num(z)/den(z) with coefficient lists in descending powers of z."""
        d = max(len(_trim(num)), len(_trim(den))) - 1
        return validate_map(HomForm.from_affine(_trim(num) or [0], d), HomForm.from_affine(_trim(den) or [0], d))

    @property
    def degree(self) -> int:
        return self.F.degree

    @cached_property
    def resultant(self) -> int:
        return resultant(self.F, self.G)

    @cached_property
    def cofactors(self) -> tuple[HomForm, HomForm, HomForm, HomForm]:
        return resultant_cofactors(self.F, self.G)

    def lift(self, z0, z1):
        return self.F(z0, z1), self.G(z0, z1)

    def __call__(self, P: ProjPointQ) -> ProjPointQ:
        return ProjPointQ(*self.lift(P.a, P.b))

    def affine_coefficients(self) -> tuple[list[int], list[int]]:
        return list(self.F.coeffs), list(self.G.coeffs)

    def to_json(self) -> dict:
        return {"F": self.F.to_json(), "G": self.G.to_json(), "degree": self.degree}

    def __str__(self) -> str:
        def aff(form):
            d = form.degree
            parts = []
            for j, c in enumerate(form.coeffs):
                if c:
                    e = d - j
                    mono = "" if e == 0 else ("z" if e == 1 else f"z^{e}")
                    if mono and abs(c) == 1:
                        parts.append(("-" if c < 0 else "") + mono)
                    else:
                        parts.append(f"{c}{'*' if mono else ''}{mono}")
            return " + ".join(parts).replace("+ -", "- ")
        return f"({aff(self.F)})/({aff(self.G)})"


def _trim(cs: Sequence[int]) -> list[int]:
    cs = [int(c) for c in cs]
    i = 0
    while i < len(cs) - 1 and cs[i] == 0:
        i += 1
    return cs[i:]


def validate_map(F: HomForm, G: HomForm) -> RationalMap:
    """Check a pair of forms and return it with joint content and sign normalized."""
    if F.degree != G.degree:
        raise DegreeMismatch(f"deg F = {F.degree} but deg G = {G.degree}")
    if F.degree < 2:
        raise DegreeTooSmall(f"degree {F.degree} < 2; phi must have degree at least two")
    if F.is_zero or G.is_zero or resultant(F, G) == 0:
        raise DegenerateMap("Res(F, G) = 0: F and G share a projective root")
    c = gcd(F.content(), G.content())
    if G.leading() < 0:
        c = -c
    return RationalMap(HomForm(tuple(x // c for x in F.coeffs)), HomForm(tuple(x // c for x in G.coeffs)))


def _joint_primitive(F: HomForm, G: HomForm) -> tuple[HomForm, HomForm]:
    c = gcd(F.content(), G.content())
    if c <= 1:
        return F, G
    return HomForm(tuple(x // c for x in F.coeffs)), HomForm(tuple(x // c for x in G.coeffs))


def iterate_pair(phi: RationalMap, n: int, max_bits: int = DEFAULT_MAX_BITS) -> tuple[HomForm, HomForm]:
    """Jointly primitive forms (F_n, G_n) of degree d**n representing phi^n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _iterate_cached(phi, n, max_bits)


def _iterate_cached(phi: RationalMap, n: int, max_bits: int) -> tuple[HomForm, HomForm]:
    cache = phi.__dict__.setdefault("_iterates", {0: (HomForm((1, 0)), HomForm((0, 1)))})
    k = max(i for i in cache if i <= n)
    Fk, Gk = cache[k]
    while k < n:
        Fk, Gk = _joint_primitive(phi.F.compose(Fk, Gk), phi.G.compose(Fk, Gk))
        k += 1
        bits = max(Fk.height_bits(), Gk.height_bits())
        if bits > max_bits:
            raise BudgetExceeded(f"phi^{k} has {bits}-bit coefficients (limit {max_bits})")
        cache[k] = (Fk, Gk)
    return Fk, Gk


# ---------------------------------------------------------------------------
# algebraic sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicSet:
    """Galois-stable finite subset of P^1(Qbar): the roots of a primitive squarefree form."""

    form: HomForm
    # disjoint factors of ``form`` it was assembled from, if known
    parts: tuple[HomForm, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.form.is_zero:
            raise ValueError("the zero form does not define a finite set")
        if squarefree_primitive_part(self.form) != self.form:
            raise ValueError("AlgebraicSet needs a primitive squarefree form")

    @classmethod
    def from_form(cls, form: HomForm) -> "AlgebraicSet":
        return cls(squarefree_primitive_part(form))

    @classmethod
    def from_points(cls, points: Sequence[ProjPointQ]) -> "AlgebraicSet":
        f = HomForm.one()
        for P in points:
            f = f * P.form()
        return cls.from_form(f)

    @classmethod
    def point(cls, P: ProjPointQ) -> "AlgebraicSet":
        return cls(P.form())

    @classmethod
    def empty(cls) -> "AlgebraicSet":
        return cls(HomForm.one())

    @property
    def size(self) -> int:
        return self.form.degree

    def __len__(self) -> int:
        return self.size

    @property
    def is_empty(self) -> bool:
        return self.size == 0

    def contains(self, P: ProjPointQ) -> bool:
        return self.form(P.a, P.b) == 0

    def contains_infinity(self) -> bool:
        return self.form.infinity_multiplicity() > 0

    def without_infinity(self) -> "AlgebraicSet":
        if not self.contains_infinity():
            return self
        return AlgebraicSet(exact_div(self.form, HomForm((0, 1))))

    def is_disjoint(self, other: "AlgebraicSet") -> bool:
        if self.is_empty or other.is_empty:
            return True
        return resultant(self.form, other.form) != 0

    def components(self) -> tuple[HomForm, ...]:
        if self.parts:
            return self.parts
        return () if self.is_empty else (self.form,)

    def union(self, other: "AlgebraicSet") -> "AlgebraicSet":
        if self.is_disjoint(other):
            return AlgebraicSet(self.form * other.form, self.components() + other.components())
        return AlgebraicSet.from_form(self.form * other.form)

    def minus(self, other: "AlgebraicSet") -> "AlgebraicSet":
        if self.is_empty or other.is_empty:
            return self
        return AlgebraicSet(exact_div(self.form, form_gcd(self.form, other.form)))

    def rational_points(self) -> list[ProjPointQ]:
        return rational_roots(self.form)

    def is_rational(self) -> bool:
        return len(self.rational_points()) == self.size

    def to_json(self) -> dict:
        return {"form": self.form.to_json(), "size": self.size}


def rational_roots(form: HomForm) -> list[ProjPointQ]:
    """All roots of ``form`` in P^1(Q), each listed once."""
    sf = squarefree_primitive_part(form)
    out: list[ProjPointQ] = []
    if sf.degree == 0:
        return out
    lead = sf.affine()[0]
    dens = divisors(lead)
    for root in complex_roots_certified(sf, target_radius=1e-30):
        if root.at_infinity:
            out.append(ProjPointQ.infinity())
            continue
        if root.exact is not None:
            out.append(ProjPointQ.from_value(root.exact))
            continue
        if not root.is_real():
            continue
        x = mpf_to_fraction(root.approximation.real)
        r = mpf_to_fraction(root.radius)
        for b in dens:
            a = round(x * b)
            if abs(Fraction(a, b) - x) <= r and sf(a, b) == 0:
                out.append(ProjPointQ(a, b))
                break
    return sorted(set(out))


# ---------------------------------------------------------------------------
# preperiodicity and reduction
# ---------------------------------------------------------------------------

def preperiodicity_form(phi: RationalMap, m: int, n: int) -> HomForm:
    """F_m G_n - F_n G_m, unreduced; its roots are the solutions of phi^m = phi^n."""
    if not m > n >= 0:
        raise ValueError("need m > n >= 0")
    Fm, Gm = iterate_pair(phi, m)
    Fn, Gn = iterate_pair(phi, n)
    return Fm * Gn - Fn * Gm


def preperiodicity_set(phi: RationalMap, m: int, n: int) -> AlgebraicSet:
    """Points with phi^m(P) = phi^n(P), as a primitive squarefree form."""
    H = preperiodicity_form(phi, m, n)
    if H.is_zero:
        raise ZeroForm(f"phi^{m} and phi^{n} coincide")
    return AlgebraicSet.from_form(H)


def bad_primes(phi: RationalMap) -> list[int]:
    """Primes dividing Res(F, G) for the jointly primitive pair."""
    return sorted(prime_factors(phi.resultant))


# ---------------------------------------------------------------------------
# height constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeightConstants:
    """Rigorous bounds on the one-step height defect of phi.

    ``global_bound`` bounds |h(phi(Q)) - d h(Q)| over P^1(Qbar) (max norm,
    summed over places).  ``arch_bound`` bounds |log||F(u)|| - d log||u|||
    for the Euclidean norm on C^2.  ``padic_bounds`` maps each bad prime to
    v_p(Res), the bound on the valuation drop of one step.
    """

    upper_log: float
    cofactor_log: float
    resultant_log: float
    global_bound: float
    arch_bound: float
    padic_bounds: dict = field(default_factory=dict)


def height_constants(phi: RationalMap) -> HeightConstants:
    cached = phi.__dict__.get("_height_constants")
    if cached is not None:
        return cached
    d = phi.degree
    U0, V0, U1, V1 = phi.cofactors
    c = max(U0.l1_norm() + V0.l1_norm(), U1.l1_norm() + V1.l1_norm())
    lf, lg = phi.F.l1_norm(), phi.G.l1_norm()
    upper = _log_up(max(lf, lg))
    cof = _log_up(c)
    res_log = _log_down(abs(phi.resultant))
    arch_upper = 0.5 * _log_up(lf * lf + lg * lg)
    arch_lower = res_log - cof - (d / 2) * math.log(2) * (1 - 1e-12)
    hc = HeightConstants(
        upper_log=upper,
        cofactor_log=cof,
        resultant_log=res_log,
        global_bound=max(upper, cof, 0.0),
        arch_bound=max(arch_upper, -arch_lower, 0.0),
        padic_bounds={p: e for p, e in prime_factors(phi.resultant).items()},
    )
    phi.__dict__["_height_constants"] = hc
    return hc


# ---------------------------------------------------------------------------
# rational orbits
# ---------------------------------------------------------------------------

@dataclass
class OrbitRecord:
    """Exact forward orbit of a rational point.

    ``status`` is "preperiodic", "not_preperiodic" or "undecided".  When
    ``cycle_length`` is set, phi(points[-1]) == points[tail_length].
    """

    points: list[ProjPointQ]
    tail_length: int | None
    cycle_length: int | None
    status: str
    height_bound: float

    def to_json(self) -> dict:
        return {
            "points": [p.to_json() for p in self.points],
            "tail_length": self.tail_length,
            "cycle_length": self.cycle_length,
            "status": self.status,
            "height_bound": repr(self.height_bound),
        }


def weil_height(P: ProjPointQ) -> float:
    return math.log(max(abs(P.a), abs(P.b)))


def decide_preperiodic_rational(phi: RationalMap, P: ProjPointQ, max_steps: int = 1000) -> OrbitRecord:
    """Iterate exactly until the orbit cycles or leaves the preperiodic height range.

    A rational point Q with h(Q) > C/(d-1), C the one-step defect bound, has
    positive canonical height and so is not preperiodic.
    """
    hc = height_constants(phi)
    bound = hc.global_bound / (phi.degree - 1)
    cutoff = bound * (1 + 1e-12) + 1e-12
    points = [P]
    seen = {P: 0}
    Q = P
    for _ in range(max_steps):
        if weil_height(Q) > cutoff:
            return OrbitRecord(points, None, None, "not_preperiodic", bound)
        Q = phi(Q)
        if Q in seen:
            return OrbitRecord(points, seen[Q], len(points) - seen[Q], "preperiodic", bound)
        seen[Q] = len(points)
        points.append(Q)
    return OrbitRecord(points, None, None, "undecided", bound)


# ---------------------------------------------------------------------------
# Mobius conjugation
# ---------------------------------------------------------------------------

Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def _as_matrix(f) -> Matrix2:
    if len(f) == 4:
        a, b, c, d = f
    else:
        (a, b), (c, d) = f
    return ((int(a), int(b)), (int(c), int(d)))


def mobius_apply(f, P: ProjPointQ) -> ProjPointQ:
    """f(z) = (a z + b)/(c z + d) on a rational point."""
    (a, b), (c, d) = _as_matrix(f)
    return ProjPointQ(a * P.a + b * P.b, c * P.a + d * P.b)


def mobius_inverse(f) -> Matrix2:
    (a, b), (c, d) = _as_matrix(f)
    return ((d, -b), (-c, a))


def conjugate_by_mobius(phi: RationalMap, f) -> RationalMap:
    """f^{-1} o phi o f for an invertible integer matrix f = [[a, b], [c, d]]."""
    (a, b), (c, d) = _as_matrix(f)
    if a * d - b * c == 0:
        raise ValueError("singular Mobius matrix")
    l0 = HomForm((a, b))
    l1 = HomForm((c, d))
    Ff = phi.F.compose(l0, l1)
    Gf = phi.G.compose(l0, l1)
    return validate_map(d * Ff - b * Gf, -c * Ff + a * Gf)


def matrix_det(f) -> int:
    (a, b), (c, d) = _as_matrix(f)
    return a * d - b * c
