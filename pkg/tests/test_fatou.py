from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithdyn import fixtures
from arithdyn.algebra import ProjPointQ
from arithdyn.dynamics import bad_primes, mobius_apply
from arithdyn.fatou import (
    CERTIFIED,
    NOT_CERTIFIED,
    attracting_cycles_arch,
    basin_certificate_arch,
    periodic_cycles_arch,
    totally_fatou_report,
    verify_basin_certificate,
)
from arithdyn.places import ARCH


def pt(t):
    return ProjPointQ.parse(t)


def cycle_sets(cycles):
    return {frozenset(str(p.rational) for p in c.points): c.exact_multiplier for c in cycles}


def test_example1_cycles(ex1):
    got = cycle_sets(attracting_cycles_arch(ex1))
    assert got[frozenset({"0"})] == 0
    # the rational 2-cycle -1/2 <-> -1/3 is super-attracting as well
    assert got[frozenset({"-1/2", "-1/3"})] == 0


def test_square_cycles(square):
    got = cycle_sets(attracting_cycles_arch(square))
    assert got == {frozenset({"0"}): 0, frozenset({"inf"}): 0}


def test_basilica_cycle(ex2):
    got = cycle_sets(attracting_cycles_arch(ex2))
    assert got[frozenset({"0", "-1"})] == 0


def test_multipliers_conjugation_invariant(ex3, psi):
    f = fixtures.EXAMPLE3_CONJUGATOR
    a = {c.points[0].rational: c.exact_multiplier for c in periodic_cycles_arch(ex3, 1) if c.points[0].rational}
    b = {c.points[0].rational: c.exact_multiplier for c in periodic_cycles_arch(psi, 1) if c.points[0].rational}
    assert a == {pt("0"): 0, pt("-1/4"): Fraction(-1, 2), pt("-1"): Fraction(5, 2)}
    assert {mobius_apply(f, P): lam for P, lam in a.items()} == b


def test_nonrational_cycle_multipliers_conjugation_invariant(ex3, psi):
    # period-2 cycles are irrational; compare multiplier multisets numerically
    ma = sorted(c.multiplier.real for c in periodic_cycles_arch(ex3, 2) if c.period == 2)
    mb = sorted(c.multiplier.real for c in periodic_cycles_arch(psi, 2) if c.period == 2)
    assert len(ma) == len(mb) >= 1
    assert ma == pytest.approx(mb, abs=1e-12)


@pytest.mark.parametrize("name, t", [
    ("example1", "inf"), ("example1", "0"), ("example3", "inf"), ("square", "2"),
    ("example2", "1/2"), ("psi", "6"),
])
def test_certificates_verify(name, t):
    phi = fixtures.get(name)
    cert = basin_certificate_arch(phi, pt(t))
    assert cert is not None
    assert cert.contraction < 1
    assert verify_basin_certificate(phi, cert)


def test_fixed_point_certified_immediately(ex1):
    cert = basin_certificate_arch(ex1, pt("0"))
    assert cert.landing_index == 0


def test_unit_circle_not_certified(square):
    assert basin_certificate_arch(square, pt("1")) is None
    assert basin_certificate_arch(square, pt("-1")) is None


def test_tampered_certificate_rejected(ex1):
    cert = basin_certificate_arch(ex1, pt("inf"))
    cert.radius = "5"
    assert not verify_basin_certificate(ex1, cert)


def test_tampered_start_rejected(square):
    cert = basin_certificate_arch(square, pt("2"))
    cert.start = pt("1")
    assert not verify_basin_certificate(square, cert)


def test_report_example1(ex1):
    rep = totally_fatou_report(ex1, pt("inf"))
    assert set(rep.per_place.values()) == {CERTIFIED}
    assert rep.evidence[ARCH]["cycle"]["exact_multiplier"] == "0"


def test_report_example3(ex3):
    rep = totally_fatou_report(ex3, pt("inf"))
    assert rep.status("inf") == CERTIFIED
    assert rep.status(2) == NOT_CERTIFIED
    assert all(rep.status(p) == CERTIFIED for p in (3, 5, 7, 11, 13, 47))


def test_report_psi_at_bad_prime(psi):
    # the 2-adic Julia set of psi is never certified Fatou
    for t in ("0", "1", "1/2", "inf"):
        assert totally_fatou_report(psi, pt(t), prime_budget=5).status(2) == NOT_CERTIFIED


@pytest.mark.parametrize("name", ["example1", "example3", "psi", "square"])
def test_good_reduction_certificates_match(name):
    phi = fixtures.get(name)
    rep = totally_fatou_report(phi, pt("3"), prime_budget=30)
    bad = set(bad_primes(phi))
    for v, status in rep.per_place.items():
        if v.p is not None:
            assert (status == CERTIFIED) == (v.p not in bad)


@settings(max_examples=15)
@given(st.integers(-9, 9), st.integers(1, 9))
def test_no_false_certificates_on_square(a, b):
    # |z| = 1 is the Julia set of z^2; anything else is attracted to 0 or infinity
    square = fixtures.square()
    P = ProjPointQ(a, b)
    cert = basin_certificate_arch(square, P)
    if abs(P.a) == abs(P.b):
        assert cert is None
    else:
        assert cert is not None and verify_basin_certificate(square, cert)
