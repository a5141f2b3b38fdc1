from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st
from mpmath import mp

from arithdyn.algebra import (
    HomForm,
    ProjPointQ,
    complex_roots_certified,
    divides,
    exact_div,
    form_gcd,
    newton_polygon_root_valuations,
    resultant,
    resultant_cofactors,
    squarefree_primitive_part,
    valuation,
)
from arithdyn.algebra.forms import bareiss_det, sylvester_matrix

x = sympy.symbols("x")


def F(*cs):
    return HomForm(tuple(cs))


def sym(form):
    """Affine sympy polynomial in x = z0/z1."""
    return sympy.Poly(list(form.coeffs), x)


forms = st.integers(1, 4).flatmap(
    lambda d: st.lists(st.integers(-9, 9), min_size=d + 1, max_size=d + 1)
).filter(lambda cs: cs[0] != 0 and any(cs)).map(lambda cs: HomForm(tuple(cs)))


# -- resultants ---------------------------------------------------------------

@pytest.mark.parametrize("a, b, expected", [
    (F(1, 0), F(0, 1), 1),
    (F(1, 0, 0), F(1, 4, 1), 1),
    (F(2, 0, 0), F(4, 7, 1), 4),
])
def test_resultant_examples(a, b, expected):
    assert resultant(a, b) == expected


@given(forms, forms)
def test_resultant_matches_sympy(a, b):
    # sympy's sign convention differs in some degree combinations; the sign
    # is pinned by the root product test below
    assert abs(resultant(a, b)) == abs(int(sympy.resultant(sym(a).as_expr(), sym(b).as_expr(), x)))


@given(forms, forms)
def test_resultant_root_product(a, b):
    # Res(a, b) = lc(a)^deg b * prod b(alpha) = lc(a)^deg b * det b(C), C the companion matrix of a
    m = a.degree
    lc = sympy.Rational(a.coeffs[0])
    C = sympy.zeros(m, m)
    for i in range(1, m):
        C[i, i - 1] = 1
    for i in range(m):
        C[i, m - 1] = -sympy.Rational(a.coeffs[m - i], a.coeffs[0])
    bC = sympy.zeros(m, m)
    for c in b.coeffs:
        bC = bC * C + c * sympy.eye(m)
    assert lc ** b.degree * bC.det() == resultant(a, b)


@given(forms, forms, forms)
def test_resultant_multiplicative(a, b, c):
    assert resultant(a * b, c) == resultant(a, c) * resultant(b, c)


@given(forms, forms)
def test_resultant_zero_iff_common_factor(a, b):
    g = form_gcd(a, b)
    assert (resultant(a, b) == 0) == (g.degree > 0)


def test_resultant_vanishes_on_shared_infinity():
    # both forms have the root (1:0)
    assert resultant(F(0, 1, 2), F(0, 3)) == 0


def test_bareiss_matches_sympy_det():
    a, b = F(3, -1, 4, 1), F(2, 7, -5)
    M = sylvester_matrix(a, b)
    assert bareiss_det(M) == int(sympy.Matrix(M).det())


@given(st.integers(2, 4).flatmap(
    lambda d: st.tuples(*[st.lists(st.integers(-9, 9), min_size=d + 1, max_size=d + 1)] * 2)))
def test_cofactor_identity(pair):
    a, b = HomForm(tuple(pair[0])), HomForm(tuple(pair[1]))
    assume(not a.is_zero and not b.is_zero)
    R = resultant(a, b)
    assume(R != 0)
    U0, V0, U1, V1 = resultant_cofactors(a, b)
    d = a.degree
    assert U0 * a + V0 * b == HomForm.monomial(2 * d - 1, 0, R)
    assert U1 * a + V1 * b == HomForm.monomial(0, 2 * d - 1, R)


# -- squarefree parts ---------------------------------------------------------

@pytest.mark.parametrize("a, expected", [
    (F(2, 0, 0), F(1, 0)),
    (F(1, -1) * F(1, -1) * F(1, 1), F(1, -1) * F(1, 1)),
    (F(0, 6, 0), F(0, 1, 0)),
])
def test_squarefree_examples(a, expected):
    assert squarefree_primitive_part(a) == expected


@given(forms, st.integers(1, 3))
def test_squarefree_idempotent(a, k):
    s = squarefree_primitive_part(a ** k)
    assert squarefree_primitive_part(s) == s
    assert s == squarefree_primitive_part(a)


@given(forms)
def test_squarefree_sign_and_content(a):
    s = squarefree_primitive_part(a)
    nz = [c for c in s.coeffs if c]
    assert nz[0] > 0
    assert gcd(*s.coeffs) == 1


@given(forms, forms)
def test_exact_division_by_gcd(a, b):
    g = form_gcd(a, b)
    assert divides(g, a) and divides(g, b)
    assert exact_div(a * b, b) == a


# -- Newton polygons ----------------------------------------------------------

@pytest.mark.parametrize("a, p, expected", [
    (F(1, 0, -2), 2, [Fraction(1, 2)] * 2),
    (F(1, 0, -1), 2, [0, 0]),
    (F(2, -1), 2, [-1]),
])
def test_newton_examples(a, p, expected):
    assert newton_polygon_root_valuations(a, p).as_sorted_list() == expected


roots = st.lists(
    st.tuples(st.integers(-60, 60).filter(bool), st.integers(1, 60)), min_size=1, max_size=5
)


@given(roots, st.sampled_from([2, 3, 5, 7]))
def test_newton_matches_known_roots(rs, p):
    # oracle: the form is a product of linear factors with known rational roots
    f = HomForm.one()
    expected = []
    for a, b in rs:
        f = f * HomForm.linear(a, b)
        expected.append(Fraction(valuation(Fraction(a, b), p)))
    assert newton_polygon_root_valuations(f, p).as_sorted_list() == sorted(expected)


@given(forms, st.sampled_from([2, 3, 5]))
def test_newton_sum_identity(a, p):
    # lead = coeffs[0] (z0^d), constant = coeffs[-1]
    assume(a.coeffs[-1] != 0)
    vm = newton_polygon_root_valuations(a, p)
    assert vm.total == a.degree
    assert vm.finite_sum() == valuation(a.coeffs[-1], p) - valuation(a.coeffs[0], p)


def test_newton_counts_zero_and_infinity():
    f = F(0, 1, 0) * F(1, 0, -2)     # z0 z1 (z0^2 - 2 z1^2)
    vm = newton_polygon_root_valuations(f, 2)
    assert (vm.zero_roots, vm.infinite_roots) == (1, 1)
    assert vm.as_sorted_list() == [Fraction(1, 2)] * 2


def test_newton_rejects_composite():
    with pytest.raises(ValueError):
        newton_polygon_root_valuations(F(1, 2), 4)


# -- certified roots ----------------------------------------------------------

def _contains(root, value):
    return abs(root.approximation - value) <= root.radius


def test_gaussian_units():
    rs = complex_roots_certified(F(1, 0, 1), 1e-30)
    assert len(rs) == 2
    for target in (1j, -1j):
        assert sum(_contains(r, mp.mpc(target)) for r in rs) == 1
    assert all(r.radius <= 1e-30 for r in rs)


def test_golden_pair():
    rs = complex_roots_certified(F(1, 3, 1), 1e-40, prec=200)
    # reference values well beyond the disc radii
    with mp.workprec(600):
        for target in ((-3 + mp.sqrt(5)) / 2, (-3 - mp.sqrt(5)) / 2):
            assert sum(_contains(r, target) for r in rs) == 1


def test_linear_root_exact():
    (r,) = complex_roots_certified(F(1, -7))
    assert r.exact == 7 and r.radius == 0


def test_infinity_and_zero_markers():
    rs = complex_roots_certified(F(0, 1, 0))
    assert sorted(r.at_infinity for r in rs) == [False, True]
    assert next(r for r in rs if not r.at_infinity).exact == 0


@given(forms.filter(lambda f: f.degree >= 2))
def test_roots_disjoint_and_complete(a):
    s = squarefree_primitive_part(a)
    rs = complex_roots_certified(s, 1e-20)
    assert len(rs) == s.degree
    with mp.workprec(400):
        for i, r in enumerate(rs):
            for t in rs[i + 1:]:
                if r.at_infinity or t.at_infinity:
                    continue
                assert abs(r.approximation - t.approximation) > r.radius + t.radius


@given(forms.filter(lambda f: f.degree >= 2))
def test_mahler_measure_against_sympy(a):
    s = squarefree_primitive_part(a)
    assume(s.coeffs[0] != 0)
    rs = complex_roots_certified(s, 1e-25)
    with mp.workprec(160):
        ours = abs(mp.mpf(s.coeffs[0]))
        slack = mp.mpf(0)
        for r in rs:
            m = abs(r.approximation)
            ours *= max(1, m)
            slack += r.radius
        poly = sympy.Poly(list(s.coeffs), x)
        ref = abs(poly.LC())
        for z in poly.nroots(n=40):
            ref *= max(1, abs(complex(z)))
        assert abs(float(ours) - float(ref)) <= 1e-9 * max(1.0, float(ref))


# -- points -------------------------------------------------------------------

@pytest.mark.parametrize("text, lift", [
    ("inf", (1, 0)), ("3/-6", (-1, 2)), ("4:6", (2, 3)), ("-5", (-5, 1)), ("-1:0", (1, 0)),
])
def test_point_parsing_normalizes(text, lift):
    assert ProjPointQ.parse(text).lift == lift


def test_zero_zero_rejected():
    with pytest.raises(ValueError):
        ProjPointQ(0, 0)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_point_form_vanishes(a, b):
    assume((a, b) != (0, 0))
    P = ProjPointQ(a, b)
    assert P.form()(*P.lift) == 0
    assert P.form().degree == 1
