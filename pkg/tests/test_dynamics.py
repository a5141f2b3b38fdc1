import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from arithdyn import fixtures
from arithdyn.algebra import HomForm, ProjPointQ, divides, squarefree_primitive_part
from arithdyn.algebra.integers import prime_factors
from arithdyn.dynamics import (
    AlgebraicSet,
    RationalMap,
    bad_primes,
    conjugate_by_mobius,
    decide_preperiodic_rational,
    height_constants,
    iterate_pair,
    matrix_det,
    mobius_apply,
    mobius_inverse,
    preperiodicity_form,
    preperiodicity_set,
    rational_roots,
    validate_map,
    weil_height,
)
from arithdyn.errors import BudgetExceeded, DegenerateMap, DegreeMismatch, DegreeTooSmall

from .conftest import random_points

x = sympy.symbols("x")

MAPS = ["example1", "example2", "example3", "psi", "square"]

points = st.builds(lambda a, b: ProjPointQ(a, b) if (a, b) != (0, 0) else ProjPointQ(1, 0),
                   st.integers(-40, 40), st.integers(0, 40))


def pt(t):
    return ProjPointQ.parse(t)


# -- validation ---------------------------------------------------------------

def test_example1_is_valid():
    phi = validate_map(HomForm((1, 0, 0)), HomForm((1, 4, 1)))
    assert phi.degree == 2 and phi.resultant == 1
    assert str(phi) == "(z^2)/(z^2 + 4*z + 1)"


@pytest.mark.parametrize("F, G, err", [
    ((1, 0, 0), (0, 1, 0), DegenerateMap),
    ((1, 0), (0, 1), DegreeTooSmall),
    ((1, 0, 0), (0, 1), DegreeMismatch),
])
def test_validation_errors(F, G, err):
    with pytest.raises(err):
        validate_map(HomForm(F), HomForm(G))


def test_validation_strips_joint_content_and_sign():
    phi = validate_map(HomForm((-2, 0, 0)), HomForm((-2, -8, -2)))
    assert phi.F.coeffs == (1, 0, 0) and phi.G.coeffs == (1, 4, 1)


def test_from_affine_matches_fixture():
    assert RationalMap.from_affine([2, 0, 0], [4, 7, 1]) == fixtures.example3()


# -- iteration ----------------------------------------------------------------

def test_iterate_small_cases(square, ex1):
    assert iterate_pair(ex1, 0) == (HomForm((1, 0)), HomForm((0, 1)))
    assert iterate_pair(ex1, 1) == (ex1.F, ex1.G)
    assert iterate_pair(square, 2) == (HomForm((1, 0, 0, 0, 0)), HomForm((0, 0, 0, 0, 1)))


@pytest.mark.parametrize("name", MAPS)
def test_iterate_degrees(name):
    phi = fixtures.get(name)
    for n in range(5):
        F, G = iterate_pair(phi, n)
        assert F.degree == G.degree == phi.degree ** n


@pytest.mark.parametrize("name", MAPS)
def test_iterate_agrees_with_pointwise(name):
    phi = fixtures.get(name)
    for P in random_points(7, 8):
        F, G = iterate_pair(phi, 3)
        Q = P
        for _ in range(3):
            Q = phi(Q)
        assert ProjPointQ(F(*P.lift), G(*P.lift)) == Q


def test_iterate_budget(ex1):
    fresh = RationalMap.from_affine([1, 0, 0], [1, 4, 1])
    with pytest.raises(BudgetExceeded):
        iterate_pair(fresh, 8, max_bits=50)


# -- preperiodic sets ---------------------------------------------------------

def test_square_fixed_points(square):
    Z = preperiodicity_set(square, 1, 0)
    assert Z.form == HomForm((0, 1, -1, 0))          # z0 z1 (z0 - z1)
    assert set(Z.rational_points()) == {pt("0"), pt("inf"), pt("1")}


def test_example1_fixed_points(ex1):
    Z = preperiodicity_set(ex1, 1, 0)
    assert Z.form == HomForm((1, 3, 1, 0))
    assert Z.rational_points() == [pt("0")]


def test_basilica_two_cycle(ex2):
    # 0 -> -1 -> 0 has exact period 2: it solves phi^2 = id
    Z20 = preperiodicity_set(ex2, 2, 0)
    assert Z20.contains(pt("0")) and Z20.contains(pt("-1"))
    # phi^2 = phi picks out the points mapping to a fixed point
    Z21 = preperiodicity_set(ex2, 2, 1)
    assert not Z21.contains(pt("0"))
    # phi(1) = 0 is not fixed either; 1 appears only from (3, 1) on
    assert preperiodicity_set(ex2, 3, 1).contains(pt("1"))


def _sympy_affine(phi, k):
    z = x
    for _ in range(k):
        num = sum(c * z ** (phi.degree - j) for j, c in enumerate(phi.F.coeffs))
        den = sum(c * z ** (phi.degree - j) for j, c in enumerate(phi.G.coeffs))
        z = sympy.cancel(num / den)
    return z


@pytest.mark.parametrize("name", MAPS)
@pytest.mark.parametrize("m, n", [(1, 0), (2, 0), (2, 1)])
def test_preperiodic_form_matches_symbolic(name, m, n):
    phi = fixtures.get(name)
    Z = preperiodicity_set(phi, m, n)
    num = sympy.numer(sympy.together(_sympy_affine(phi, m) - _sympy_affine(phi, n)))
    ref = sympy.Poly(sympy.sqf_part(sympy.Poly(num, x)), x)
    finite = Z.without_infinity()
    ours = sympy.Poly(list(finite.form.affine()), x) if finite.size else sympy.Poly(1, x)
    assert sympy.Poly(ref.monic(), x) == sympy.Poly(ours.monic(), x)
    inf = pt("inf")
    a, b = inf, inf
    for _ in range(m):
        a = phi(a)
    for _ in range(n):
        b = phi(b)
    assert Z.contains_infinity() == (a == b)


@pytest.mark.parametrize("name", MAPS)
@pytest.mark.parametrize("m, n", [(1, 0), (2, 0), (2, 1), (3, 1)])
def test_preperiodic_sets_forward_invariant(name, m, n):
    phi = fixtures.get(name)
    H = preperiodicity_set(phi, m, n).form
    assert divides(H, H.compose(phi.F, phi.G))
    assert divides(H, preperiodicity_set(phi, m + 1, n + 1).form)


@pytest.mark.parametrize("name", MAPS)
def test_rational_preperiodic_points_confirmed(name):
    phi = fixtures.get(name)
    for m, n in [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1)]:
        for P in preperiodicity_set(phi, m, n).rational_points():
            assert decide_preperiodic_rational(phi, P).status == "preperiodic"


def test_index_order_enforced(ex1):
    with pytest.raises(ValueError):
        preperiodicity_set(ex1, 1, 1)


def test_rational_roots_exact():
    f = HomForm.linear(-1, 3) * HomForm.linear(-1, 2) * HomForm((1, 0, -2)) * HomForm((0, 1))
    assert set(rational_roots(f)) == {pt("-1/3"), pt("-1/2"), pt("inf")}


@given(st.lists(st.tuples(st.integers(-30, 30), st.integers(1, 30)), min_size=1, max_size=4),
       st.integers(2, 7))
def test_rational_roots_recovers_planted(rs, k):
    planted = {ProjPointQ(a, b) for a, b in rs}
    f = HomForm((1, 0, k))             # z0^2 + k z1^2, no rational roots
    for P in planted:
        f = f * P.form()
    assert set(rational_roots(f)) == planted


# -- reduction ----------------------------------------------------------------

@pytest.mark.parametrize("name, expected, R", [
    ("example1", [], 1), ("example3", [2], 4), ("psi", [2], 4), ("square", [], 1), ("example2", [], 1),
])
def test_bad_primes(name, expected, R):
    phi = fixtures.get(name)
    assert bad_primes(phi) == expected
    assert abs(phi.resultant) == R


@pytest.mark.parametrize("name", MAPS)
@pytest.mark.parametrize("f", [((1, 1), (0, 1)), ((2, 1), (1, 1)), ((3, 0), (0, 1)), ((4, 1), (1, 0))])
def test_bad_primes_under_conjugation(name, f):
    phi = fixtures.get(name)
    psi = conjugate_by_mobius(phi, f)
    allowed = set(bad_primes(phi)) | set(prime_factors(matrix_det(f)))
    assert set(bad_primes(psi)) <= allowed


# -- rational orbits ----------------------------------------------------------

def test_decide_examples(ex1, ex2):
    assert decide_preperiodic_rational(ex1, pt("0")).status == "preperiodic"
    assert decide_preperiodic_rational(ex1, pt("inf")).status == "not_preperiodic"
    rec = decide_preperiodic_rational(ex2, pt("1"))
    assert (rec.status, rec.tail_length, rec.cycle_length) == ("preperiodic", 1, 2)
    assert [str(P) for P in rec.points] == ["1", "0", "-1"]


@pytest.mark.parametrize("name", MAPS)
def test_height_constant_inequality(name):
    phi = fixtures.get(name)
    C = height_constants(phi).global_bound
    d = phi.degree
    for P in random_points(11, 40, bound=500):
        assert abs(weil_height(phi(P)) - d * weil_height(P)) <= C + 1e-12


@given(points)
def test_decide_never_wrong_on_example1(P):
    phi = fixtures.example1()
    rec = decide_preperiodic_rational(phi, P)
    if rec.status == "preperiodic":
        Q = P
        for _ in range(len(rec.points)):
            Q = phi(Q)
        assert Q in rec.points
    else:
        assert rec.status == "not_preperiodic"
        # every rational preperiodic point of this map is a fixed or 2-cycle point
        assert P not in {pt("0"), pt("-1/2"), pt("-1/3")}


# -- conjugation --------------------------------------------------------------

def test_example3_conjugation(ex3, psi):
    f = fixtures.EXAMPLE3_CONJUGATOR
    assert conjugate_by_mobius(psi, f) == ex3


def test_conjugation_identity_and_inverse(ex3):
    assert conjugate_by_mobius(ex3, ((1, 0), (0, 1))) == ex3
    f = ((2, 1), (1, 1))
    assert conjugate_by_mobius(conjugate_by_mobius(ex3, f), mobius_inverse(f)) == ex3


@given(points)
def test_conjugation_pointwise(P):
    psi, phi = fixtures.psi(), fixtures.example3()
    f = fixtures.EXAMPLE3_CONJUGATOR
    assert mobius_apply(f, phi(P)) == psi(mobius_apply(f, P))


def test_singular_matrix_rejected(ex1):
    with pytest.raises(ValueError):
        conjugate_by_mobius(ex1, ((1, 2), (2, 4)))


# -- algebraic sets -----------------------------------------------------------

def test_set_operations():
    A = AlgebraicSet.from_points([pt("0"), pt("1"), pt("inf")])
    B = AlgebraicSet.from_points([pt("1")])
    assert A.size == 3 and A.contains_infinity()
    assert A.minus(B).size == 2 and not A.minus(B).contains(pt("1"))
    assert not A.is_disjoint(B)
    C = A.minus(B).union(B)
    assert C == A
    assert A.without_infinity().size == 2


def test_set_rejects_nonsquarefree():
    with pytest.raises(ValueError):
        AlgebraicSet(HomForm((1, 0, 0)))
