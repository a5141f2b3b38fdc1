"""Disjoint Galois-stable preperiodic sets and reports built on them."""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.intervals import DEFAULT_PRECISION
from .algebra.points import ProjPointQ
from .dynamics import AlgebraicSet, RationalMap, preperiodicity_form
from .errors import BudgetExceeded, SharedPoint
from .green import gamma_place, truncated_green_average
from .places import ARCH


@dataclass(frozen=True)
class CatalogEntry:
    m: int
    n: int
    points: AlgebraicSet
    raw_degree: int          # degree of F_m G_n - F_n G_m before any reduction

    @property
    def degree(self) -> int:
        return self.points.size

    def is_algebraic_integral(self) -> bool:
        """Finite points are algebraic integers: the form without its z1 factor is monic up to sign."""
        finite = self.points.without_infinity()
        if finite.is_empty:
            return True
        return abs(finite.form.coeffs[0]) == 1

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "coefficients": self.points.form.to_json(),
            "degree": self.degree,
            "algebraic_integer": self.is_algebraic_integral(),
        }


@dataclass
class PreperiodicCatalog:
    entries: list[CatalogEntry] = field(default_factory=list)
    complete: bool = True
    note: str = ""

    @property
    def cumulative_size(self) -> int:
        return sum(e.degree for e in self.entries)

    def union(self, upto: int | None = None) -> AlgebraicSet:
        out = AlgebraicSet.empty()
        for e in self.entries[: upto if upto is not None else len(self.entries)]:
            out = out.union(e.points)
        return out

    def to_json(self) -> dict:
        return {
            "entries": [e.to_json() for e in self.entries],
            "cumulative_size": self.cumulative_size,
            "complete": self.complete,
            "note": self.note,
        }


def enumerate_preperiodic_sets(phi: RationalMap, max_m: int) -> PreperiodicCatalog:
    """New points of each Phi_{m,n}, 0 <= n < m <= max_m, in lexicographic order."""
    if max_m < 1:
        raise ValueError("max_m must be at least 1")
    catalog = PreperiodicCatalog()
    seen = AlgebraicSet.empty()
    for m in range(1, max_m + 1):
        for n in range(m):
            try:
                H = preperiodicity_form(phi, m, n)
            except BudgetExceeded as exc:
                catalog.complete = False
                catalog.note = str(exc)
                return catalog
            if H.is_zero:
                continue
            new = AlgebraicSet.from_form(H).minus(seen)
            if new.is_empty:
                continue
            catalog.entries.append(CatalogEntry(m, n, new, H.degree))
            seen = seen.union(new)
    return catalog


def algebraic_integer_filter(catalog: PreperiodicCatalog) -> tuple[list[CatalogEntry], list[CatalogEntry]]:
    passing, failing = [], []
    for e in catalog.entries:
        (passing if e.is_algebraic_integral() else failing).append(e)
    return passing, failing


@dataclass(frozen=True)
class TrendRow:
    label: str
    degree: int
    value: float
    error_bound: float
    cumulative: bool

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "degree": self.degree,
            "value": repr(self.value),
            "error_bound": repr(self.error_bound),
            "cumulative": self.cumulative,
        }


def equidistribution_report(
    phi: RationalMap,
    P: ProjPointQ,
    catalog: PreperiodicCatalog,
    M: float,
    tol: float = 1e-10,
    cumulative: bool = True,
    per_entry: bool = False,
    prec: int = DEFAULT_PRECISION,
) -> list[TrendRow]:
    """Archimedean truncated Green averages of catalog sets against P."""
    orbit = AlgebraicSet.point(P)
    for e in catalog.entries:
        if e.points.contains(P):
            raise SharedPoint(f"P lies in the ({e.m},{e.n}) entry")
    rows: list[TrendRow] = []
    if per_entry:
        for e in catalog.entries:
            lv = truncated_green_average(phi, e.points, orbit, M, tol, prec)
            rows.append(TrendRow(f"({e.m},{e.n})", e.degree, lv.value, lv.error_bound, False))
    if cumulative:
        acc = AlgebraicSet.empty()
        for e in catalog.entries:
            acc = acc.union(e.points)
            lv = truncated_green_average(phi, acc, orbit, M, tol, prec)
            rows.append(TrendRow(f"<=({e.m},{e.n})", acc.size, lv.value, lv.error_bound, True))
    return rows


def cumulative_by_max_m(catalog: PreperiodicCatalog) -> list[tuple[int, AlgebraicSet]]:
    """Union of all entries with m <= k, for each k present."""
    out = []
    acc = AlgebraicSet.empty()
    ms = sorted({e.m for e in catalog.entries})
    for k in ms:
        for e in catalog.entries:
            if e.m == k:
                acc = acc.union(e.points)
        out.append((k, acc))
    return out


def arch_gamma(phi: RationalMap, Z: AlgebraicSet, P: ProjPointQ, tol: float = 1e-10) -> float:
    return gamma_place(phi, Z, AlgebraicSet.point(P), ARCH, tol).value


def equidistribution_trend(
    phi: RationalMap, P: ProjPointQ, max_m: int, M: float, tol: float = 1e-10, prec: int = DEFAULT_PRECISION
) -> list[TrendRow]:
    """One row per k <= max_m: the union of all Phi_{m,n} sets with m <= k."""
    catalog = enumerate_preperiodic_sets(phi, max_m)
    orbit = AlgebraicSet.point(P)
    rows = []
    for k, Z in cumulative_by_max_m(catalog):
        if Z.contains(P):
            raise SharedPoint(f"P lies in a preperiodic set with m <= {k}")
        lv = truncated_green_average(phi, Z, orbit, M, tol, prec)
        rows.append(TrendRow(f"max_m={k}", Z.size, lv.value, lv.error_bound, True))
    return rows
