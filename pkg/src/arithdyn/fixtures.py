"""Built-in maps used throughout the tests and the command line."""
from __future__ import annotations

from .dynamics import RationalMap

# affine coefficient lists, descending powers of z
_AFFINE = {
    "example1": ([1, 0, 0], [1, 4, 1]),
    "example2": ([1, 0, -1], [1]),
    "example3": ([2, 0, 0], [4, 7, 1]),
    "psi": ([1, -1, 0], [2]),
    "square": ([1, 0, 0], [1]),
}

# f(z) = (4z + 1)/z, with phi_3 = f^-1 o psi o f
EXAMPLE3_CONJUGATOR = ((4, 1), (1, 0))


def names() -> list[str]:
    return sorted(_AFFINE)


def affine(name: str) -> tuple[list[int], list[int]]:
    num, den = _AFFINE[name]
    return list(num), list(den)


def get(name: str) -> RationalMap:
    try:
        num, den = _AFFINE[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(names())}") from None
    return RationalMap.from_affine(num, den)


def example1() -> RationalMap:
    """z^2/(z^2 + 4z + 1): good reduction everywhere, infinity wanders."""
    return get("example1")


def example2() -> RationalMap:
    return get("example2")


def example3() -> RationalMap:
    return get("example3")


def psi() -> RationalMap:
    return get("psi")


def square() -> RationalMap:
    return get("square")
