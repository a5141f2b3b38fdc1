"""Brute-force reference computations used by the tests."""
from fractions import Fraction

from arithdyn.algebra import HomForm, ProjPointQ, newton_polygon_root_valuations, valuation


def newton_pair_oracle(A: HomForm, beta: ProjPointQ, p: int) -> Fraction:
    """sum over roots alpha of A of -log_p delta_p(alpha, beta), from Newton polygons only."""
    total = Fraction(0)
    k_inf = A.infinity_multiplicity()
    finite = HomForm(A.coeffs[k_inf:]) if k_inf else A
    # log max(1, |alpha|) terms
    vm = newton_polygon_root_valuations(finite, p)
    total += sum((max(Fraction(0), -v) * k for v, k in vm.slopes.items()), Fraction(0))
    b0, b1 = beta.lift
    if b1 == 0:
        return total
    # roots gamma = alpha*b1 - b0 of A((w + b0)/b1), scaled to integer coefficients
    # finite(w + b0, b1) has roots w = alpha*b1 - b0
    shifted = finite.compose(HomForm((1, b0)), HomForm((0, b1)))
    wm = newton_polygon_root_valuations(shifted, p)
    assert wm.zero_roots == 0
    total += sum((v * k for v, k in wm.slopes.items()), Fraction(0))
    total += k_inf * valuation(b1, p)
    return total
