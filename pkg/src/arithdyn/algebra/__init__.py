"""Exact integer/polynomial arithmetic and certified root isolation."""
from .forms import (
    HomForm,
    bareiss_det,
    divides,
    exact_div,
    form_gcd,
    is_squarefree,
    resultant,
    resultant_cofactors,
    squarefree_primitive_part,
    sylvester_matrix,
)
from .integers import divisors, is_prime, prime_factors, valuation
from .newton import ValuationMultiset, newton_polygon_root_valuations
from .points import ProjPointQ, wedge
from .roots import CertifiedRoot, complex_roots_certified

__all__ = [
    "CertifiedRoot",
    "HomForm",
    "ProjPointQ",
    "ValuationMultiset",
    "bareiss_det",
    "complex_roots_certified",
    "divides",
    "divisors",
    "exact_div",
    "form_gcd",
    "is_prime",
    "is_squarefree",
    "newton_polygon_root_valuations",
    "prime_factors",
    "resultant",
    "resultant_cofactors",
    "squarefree_primitive_part",
    "sylvester_matrix",
    "valuation",
    "wedge",
]
