import pytest

from arithdyn import fixtures
from arithdyn.algebra import HomForm, ProjPointQ, form_gcd
from arithdyn.dynamics import AlgebraicSet, preperiodicity_form
from arithdyn.errors import SharedPoint
from arithdyn.green import gamma_total, truncated_green_average
from arithdyn.heights import canonical_height_limit
from arithdyn.preperiodic import (
    CatalogEntry,
    PreperiodicCatalog,
    algebraic_integer_filter,
    enumerate_preperiodic_sets,
    equidistribution_report,
    equidistribution_trend,
)

INF = ProjPointQ(1, 0)


def forms_of(catalog):
    return [(e.m, e.n, e.points.form.coeffs) for e in catalog.entries]


def test_square_catalog(square):
    assert forms_of(enumerate_preperiodic_sets(square, 1)) == [(1, 0, (0, 1, -1, 0))]
    cat = enumerate_preperiodic_sets(square, 2)
    assert forms_of(cat) == [
        (1, 0, (0, 1, -1, 0)),
        (2, 0, (1, 1, 1)),          # z^3 = 1, z != 1
        (2, 1, (1, 1)),             # -1, which maps onto the fixed point 1
    ]


def test_example1_catalog(ex1):
    cat = enumerate_preperiodic_sets(ex1, 1)
    assert forms_of(cat) == [(1, 0, (1, 3, 1, 0))]


def test_basilica_catalog(ex2):
    cat = enumerate_preperiodic_sets(ex2, 3)
    got = {(e.m, e.n): e.points.form.coeffs for e in cat.entries}
    assert got[(2, 0)] == (1, 1, 0)          # the 2-cycle 0 <-> -1
    assert got[(2, 1)] == (1, 1, -1)
    assert got[(3, 1)] == (1, -1)            # 1 -> 0 -> -1 -> 0
    assert cat.complete


@pytest.mark.parametrize("name", ["example1", "example2", "example3", "square", "psi"])
def test_catalog_disjoint(name):
    cat = enumerate_preperiodic_sets(fixtures.get(name), 3)
    es = cat.entries
    for i, a in enumerate(es):
        for b in es[i + 1:]:
            assert form_gcd(a.points.form, b.points.form).degree == 0


@pytest.mark.parametrize("name", ["example1", "square"])
def test_raw_degree(name):
    phi = fixtures.get(name)
    d = phi.degree
    for m in range(1, 4):
        for n in range(m):
            assert preperiodicity_form(phi, m, n).degree == d ** m + d ** n
    for e in enumerate_preperiodic_sets(phi, 3).entries:
        assert e.raw_degree == d ** e.m + d ** e.n
        assert e.degree <= e.raw_degree


def test_algebraic_integer_filter(ex2):
    passing, failing = algebraic_integer_filter(enumerate_preperiodic_sets(ex2, 3))
    assert not failing and len(passing) == 6
    custom = PreperiodicCatalog([
        CatalogEntry(1, 0, AlgebraicSet(HomForm((1, 0, -2))), 2),
        CatalogEntry(2, 0, AlgebraicSet(HomForm((2, -1))), 1),
        CatalogEntry(2, 1, AlgebraicSet(HomForm((0, 1))), 1),       # only infinity
    ])
    passing, failing = algebraic_integer_filter(custom)
    assert [(e.m, e.n) for e in passing] == [(1, 0), (2, 1)]
    assert [(e.m, e.n) for e in failing] == [(2, 0)]


def test_nonmonic_maps_fail_filter(ex1):
    _, failing = algebraic_integer_filter(enumerate_preperiodic_sets(ex1, 2))
    assert failing


def test_entries_satisfy_gamma_identity(ex1):
    h = canonical_height_limit(ex1, INF)
    for e in enumerate_preperiodic_sets(ex1, 3).entries:
        rep = gamma_total(ex1, e.points, AlgebraicSet.point(INF))
        assert abs(rep.total - h.value) <= rep.error_bound + h.error_bound


def test_report_rejects_shared_point(ex1):
    cat = enumerate_preperiodic_sets(ex1, 1)
    with pytest.raises(SharedPoint):
        equidistribution_report(ex1, ProjPointQ(0, 1), cat, 10)


def test_single_entry_report(ex1):
    cat = enumerate_preperiodic_sets(ex1, 1)
    (row,) = equidistribution_report(ex1, INF, cat, 10)
    direct = truncated_green_average(ex1, cat.entries[0].points, AlgebraicSet.point(INF), 10)
    assert row.value == direct.value and row.degree == 3


def test_per_entry_and_cumulative(ex1):
    cat = enumerate_preperiodic_sets(ex1, 2)
    rows = equidistribution_report(ex1, INF, cat, 10, per_entry=True)
    assert [r.cumulative for r in rows] == [False] * 3 + [True] * 3
    assert rows[-1].degree == cat.cumulative_size


def test_trend_decreases(ex1):
    rows = equidistribution_trend(ex1, INF, 3, 10)
    assert [r.degree for r in rows] == [3, 7, 18]
    assert rows[-1].value < rows[0].value
