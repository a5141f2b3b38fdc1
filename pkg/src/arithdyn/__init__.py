"""Arithmetic dynamics of rational maps of P^1 over Q.

Canonical heights (limit and local-sum routes), dynamical Green pairings,
preperiodic set catalogs, S-integrality tests and Fatou certificates.
"""
from .algebra import HomForm, ProjPointQ
from .dynamics import (
    AlgebraicSet,
    RationalMap,
    bad_primes,
    conjugate_by_mobius,
    decide_preperiodic_rational,
    height_constants,
    iterate_pair,
    preperiodicity_form,
    preperiodicity_set,
    validate_map,
)
from .errors import (
    ArithDynError,
    BudgetExceeded,
    DegenerateMap,
    DegreeMismatch,
    DegreeTooSmall,
    EqualPoints,
    PrecisionError,
    RootCertificationError,
    SharedPoint,
    UnsupportedPlacePoint,
    ZeroForm,
)
from .fatou import attracting_cycles_arch, basin_certificate_arch, totally_fatou_report
from .green import gamma_place, gamma_total, green_pair, orbit_green_sum_good_prime, s_integral_test
from .heights import (
    canonical_height_limit,
    canonical_height_local,
    escape_rate_arch,
    escape_rate_padic_rational,
    weil_height_point,
    weil_height_set,
)
from .places import ARCH, LogValue, Place
from .preperiodic import enumerate_preperiodic_sets, equidistribution_trend

__version__ = "0.1.0"

__all__ = [
    "ARCH",
    "AlgebraicSet",
    "ArithDynError",
    "BudgetExceeded",
    "DegenerateMap",
    "DegreeMismatch",
    "DegreeTooSmall",
    "EqualPoints",
    "HomForm",
    "LogValue",
    "Place",
    "PrecisionError",
    "ProjPointQ",
    "RationalMap",
    "RootCertificationError",
    "SharedPoint",
    "UnsupportedPlacePoint",
    "ZeroForm",
    "attracting_cycles_arch",
    "bad_primes",
    "basin_certificate_arch",
    "canonical_height_limit",
    "canonical_height_local",
    "conjugate_by_mobius",
    "decide_preperiodic_rational",
    "enumerate_preperiodic_sets",
    "equidistribution_trend",
    "escape_rate_arch",
    "escape_rate_padic_rational",
    "gamma_place",
    "gamma_total",
    "green_pair",
    "height_constants",
    "iterate_pair",
    "orbit_green_sum_good_prime",
    "preperiodicity_form",
    "preperiodicity_set",
    "s_integral_test",
    "totally_fatou_report",
    "validate_map",
    "weil_height_point",
    "weil_height_set",
]
