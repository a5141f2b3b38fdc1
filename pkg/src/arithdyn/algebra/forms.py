"""Binary homogeneous forms with integer coefficients.

A form of degree ``d`` is stored as ``coeffs[j]`` = coefficient of
``z0**(d-j) * z1**j``.  Read in the affine coordinate ``z = z0/z1`` the same
list is the dehomogenized polynomial in descending powers of ``z``; leading
zeros correspond to roots at ``(1:0)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# univariate helpers (descending coefficient lists, leading coefficient first)
# ---------------------------------------------------------------------------

def _strip(a: Sequence) -> list:
    i = 0
    while i < len(a) and a[i] == 0:
        i += 1
    return list(a[i:])


def _content(a: Sequence[int]) -> int:
    return reduce(gcd, (abs(c) for c in a), 0)


def _primitive(a: Sequence[int]) -> list[int]:
    """Primitive part with positive leading coefficient."""
    a = _strip(a)
    if not a:
        return []
    c = _content(a)
    if a[0] < 0:
        c = -c
    return [x // c for x in a]


def _derivative(a: Sequence[int]) -> list[int]:
    n = len(a) - 1
    return [c * (n - i) for i, c in enumerate(a[:-1])]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b (b nonzero, both stripped)."""
    r = list(a)
    db = len(b) - 1
    lb = b[0]
    while len(r) - 1 >= db and r:
        lr = r[0]
        r = [lb * x for x in r]
        for i, bc in enumerate(b):
            r[i] -= lr * bc
        r = _strip(r)
    return r


def _ugcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = _primitive(a), _primitive(b)
    if not a:
        return b or [1]
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


def _udivmod_q(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = [Fraction(x) for x in _strip(a)]
    b = [Fraction(x) for x in _strip(b)]
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = a
    while len(r) >= len(b) and r:
        c = r[0] / b[0]
        q[len(q) - (len(r) - len(b)) - 1] = c
        r = [x - c * y for x, y in zip(r, b + [0] * (len(r) - len(b)))]
        r = _strip(r)
    return q, r


def _umul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# HomForm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomForm:
    """Homogeneous form sum_j coeffs[j] z0^(d-j) z1^j."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a form needs at least one coefficient")
        object.__setattr__(self, "coeffs", cs)

    # construction ---------------------------------------------------------
    @classmethod
    def from_affine(cls, coeffs: Sequence[int], degree: int | None = None) -> "HomForm":
        """Homogenize a polynomial given in descending powers of z."""
        cs = [int(c) for c in coeffs]
        if degree is None:
            degree = len(cs) - 1
        if len(cs) > degree + 1:
            if any(cs[: len(cs) - degree - 1]):
                raise ValueError("polynomial degree exceeds requested form degree")
            cs = cs[len(cs) - degree - 1:]
        return cls(tuple([0] * (degree + 1 - len(cs)) + cs))

    @classmethod
    def monomial(cls, i: int, j: int, c: int = 1) -> "HomForm":
        """c * z0**i * z1**j."""
        cs = [0] * (i + j + 1)
        cs[j] = c
        return cls(tuple(cs))

    @classmethod
    def linear(cls, a: int, b: int) -> "HomForm":
        """The form b*z0 - a*z1, vanishing exactly at (a:b)."""
        return cls((b, -a))

    @classmethod
    def one(cls) -> "HomForm":
        return cls((1,))

    # basic properties ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def infinity_multiplicity(self) -> int:
        """Order of vanishing at (1:0), i.e. the power of z1 dividing the form."""
        k = 0
        for c in self.coeffs:
            if c:
                return k
            k += 1
        return k

    def zero_multiplicity(self) -> int:
        """Power of z0 dividing the form (roots at (0:1))."""
        k = 0
        for c in reversed(self.coeffs):
            if c:
                return k
            k += 1
        return k

    def affine(self) -> list[int]:
        """Dehomogenized polynomial in z, descending, with roots at infinity stripped."""
        return _strip(self.coeffs)

    def content(self) -> int:
        return _content(self.coeffs)

    def leading(self) -> int:
        for c in self.coeffs:
            if c:
                return c
        return 0

    def is_primitive(self) -> bool:
        return self.content() == 1 and self.leading() > 0

    def primitive_part(self) -> "HomForm":
        if self.is_zero:
            raise ValueError("zero form has no primitive part")
        c = self.content()
        if self.leading() < 0:
            c = -c
        return HomForm(tuple(x // c for x in self.coeffs))

    def height_bits(self) -> int:
        return max(abs(c).bit_length() for c in self.coeffs)

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: "HomForm") -> "HomForm":
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        return HomForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomForm") -> "HomForm":
        if self.degree != other.degree:
            raise ValueError("cannot subtract forms of different degrees")
        return HomForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "HomForm":
        return HomForm(tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, HomForm):
            return HomForm(tuple(_umul(self.coeffs, other.coeffs)))
        return HomForm(tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HomForm":
        out = HomForm.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, z0, z1):
        """Evaluate at (z0, z1); works for ints, Fractions, mpmath and interval numbers."""
        d = self.degree
        # Horner in z0 with powers of z1 accumulated alongside
        acc = self.coeffs[0]
        w = 1
        for c in self.coeffs[1:]:
            w = w * z1
            acc = acc * z0 + c * w
        if d == 0:
            return acc * 1
        return acc

    def partials(self) -> tuple["HomForm", "HomForm"]:
        """(d/dz0, d/dz1), each of degree d-1."""
        d = self.degree
        if d == 0:
            zero = HomForm((0,))
            return zero, zero
        dz0 = HomForm(tuple((d - j) * c for j, c in enumerate(self.coeffs[:-1])))
        dz1 = HomForm(tuple(j * c for j, c in enumerate(self.coeffs) if j > 0))
        return dz0, dz1

    def compose(self, p: "HomForm", q: "HomForm") -> "HomForm":
        """The form A(P, Q) for forms P, Q of a common degree."""
        if p.degree != q.degree:
            raise ValueError("substituted forms must share a degree")
        d = self.degree
        e = p.degree
        p_pows = [HomForm.one()]
        q_pows = [HomForm.one()]
        for _ in range(d):
            p_pows.append(p_pows[-1] * p)
            q_pows.append(q_pows[-1] * q)
        total = [0] * (d * e + 1)
        for j, c in enumerate(self.coeffs):
            if c:
                term = p_pows[d - j] * q_pows[j]
                for i, t in enumerate(term.coeffs):
                    total[i] += c * t
        return HomForm(tuple(total))

    # serialization ---------------------------------------------------------
    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Iterable) -> "HomForm":
        return cls(tuple(int(c) for c in data))

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self) -> str:
        d = self.degree
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                s for s in (_pow("z0", d - j), _pow("z1", j)) if s
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _pow(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


# ---------------------------------------------------------------------------
# gcd, exact division, squarefree part
# ---------------------------------------------------------------------------

def _rehomogenize(aff: Sequence[int], k: int) -> HomForm:
    return HomForm(tuple([0] * k + list(aff)))


def form_gcd(a: HomForm, b: HomForm) -> HomForm:
    """Primitive sign-normalized gcd of two nonzero forms."""
    if a.is_zero or b.is_zero:
        raise ValueError("gcd of a zero form is undefined here")
    k = min(a.infinity_multiplicity(), b.infinity_multiplicity())
    g = _ugcd(a.affine(), b.affine())
    return _rehomogenize(g, k)


def exact_div(a: HomForm, b: HomForm) -> HomForm:
    """Quotient a/b, raising ValueError unless it is an integral form."""
    ka, kb = a.infinity_multiplicity(), b.infinity_multiplicity()
    if ka < kb:
        raise ValueError("divisor has a higher order root at infinity")
    q, r = _udivmod_q(a.affine(), b.affine())
    if r:
        raise ValueError("division is not exact")
    if any(x.denominator != 1 for x in q):
        raise ValueError("quotient is not integral")
    return _rehomogenize([int(x) for x in q], ka - kb)


def divides(b: HomForm, a: HomForm) -> bool:
    """Whether b divides a over Q (up to a rational constant)."""
    if a.infinity_multiplicity() < b.infinity_multiplicity():
        return False
    _, r = _udivmod_q(a.affine(), b.affine())
    return not r


def squarefree_primitive_part(a: HomForm) -> HomForm:
    """Primitive form with the same projective roots as ``a``, each simple."""
    if a.is_zero:
        raise ValueError("zero form")
    k = a.infinity_multiplicity()
    f = a.affine()
    if len(f) > 1:
        g = _ugcd(f, _derivative(f))
        q, r = _udivmod_q(f, g)
        assert not r
        den = reduce(lambda x, y: x * y // gcd(x, y), (x.denominator for x in q), 1)
        sf = _primitive([int(x * den) for x in q])
    else:
        sf = [1]
    return _rehomogenize(sf, 1 if k else 0)


def is_squarefree(a: HomForm) -> bool:
    return squarefree_primitive_part(a).degree == a.degree


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def sylvester_matrix(a: HomForm, b: HomForm) -> list[list[int]]:
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(a.coeffs) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(b.coeffs) + [0] * (size - n - 1 - i))
    return rows


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def resultant(a: HomForm, b: HomForm) -> int:
    """Homogeneous resultant Res(a, b) as the Sylvester determinant."""
    if a.is_zero or b.is_zero:
        raise ValueError("resultant of a zero form")
    return bareiss_det(sylvester_matrix(a, b))


def _solve_fraction(matrix: list[list[int]], rhs: list[int]) -> list[Fraction]:
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [row[n] for row in aug]


def resultant_cofactors(a: HomForm, b: HomForm) -> tuple[HomForm, HomForm, HomForm, HomForm]:
    """Integer forms (U0, V0, U1, V1) with U0*a + V0*b = R z0^(m+n-1), U1*a + V1*b = R z1^(m+n-1).

    Here R = Res(a, b) must be nonzero; deg U = deg b - 1 and deg V = deg a - 1.
    """
    m, n = a.degree, b.degree
    if m < 1 or n < 1:
        raise ValueError("cofactors need forms of positive degree")
    res = resultant(a, b)
    if res == 0:
        raise ValueError("forms share a root")
    s = sylvester_matrix(a, b)
    size = m + n
    st = [[s[i][j] for i in range(size)] for j in range(size)]
    out = []
    for target in (0, size - 1):
        rhs = [0] * size
        rhs[target] = res
        x = _solve_fraction(st, rhs)
        if any(v.denominator != 1 for v in x):
            raise ArithmeticError("non-integral cofactor")  # pragma: no cover
        xs = [int(v) for v in x]
        out.append(HomForm(tuple(xs[:n])))
        out.append(HomForm(tuple(xs[n:])))
    return out[0], out[1], out[2], out[3]
