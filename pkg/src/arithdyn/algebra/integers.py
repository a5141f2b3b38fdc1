"""Integer helpers: valuations, prime factorizations, divisors."""
from __future__ import annotations

from fractions import Fraction

import sympy


def is_prime(p: int) -> bool:
    return p >= 2 and bool(sympy.isprime(p))


def require_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def valuation(x, p: int) -> int | float:
    """p-adic valuation of a nonzero integer or Fraction; +inf for zero."""
    if x == 0:
        return float("inf")
    x = Fraction(x)
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def prime_factors(n: int) -> dict[int, int]:
    """Factorization of |n| as {prime: exponent}; empty for |n| <= 1."""
    n = abs(int(n))
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def divisors(n: int) -> list[int]:
    n = abs(int(n))
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    return [int(x) for x in sympy.divisors(n)]


def primes_up_to(bound: int) -> list[int]:
    return [int(p) for p in sympy.primerange(2, bound + 1)]
