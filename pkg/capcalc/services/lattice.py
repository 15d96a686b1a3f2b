# capcalc/services/lattice.py
"""Intersection form, canonical class, index and symplectic area on CP^2 # n(-CP^2)."""
from fractions import Fraction
from functools import lru_cache
import logging

from capcalc.core.exceptions import DegreeMismatchError
from capcalc.schemas.classes import CohomClass, HomologyClass

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def canonical_class(n: int) -> HomologyClass:
    """K0 = -3H + E_1 + ... + E_n."""
    return HomologyClass(a=-3, b=(-1,) * n)


def intersect(A: HomologyClass, B: HomologyClass) -> int:
    if A.n != B.n:
        raise DegreeMismatchError(A.n, B.n)
    return A.a * B.a - sum(x * y for x, y in zip(A.b, B.b))


def self_intersection(A: HomologyClass) -> int:
    return intersect(A, A)


def canonical_pairing(A: HomologyClass) -> int:
    """K0 . A"""
    return intersect(canonical_class(A.n), A)


def index_formula(a: int, b) -> int:
    """a^2 + 3a - sum(b_i^2 + b_i), on raw coefficients."""
    return a * a + 3 * a - sum(x * x + x for x in b)


def index(A: HomologyClass) -> int:
    """A^2 - K0.A"""
    value = self_intersection(A) - canonical_pairing(A)
    if value != index_formula(A.a, A.b):
        # both expansions of the same quadratic form
        raise AssertionError(f"index mismatch for {A}")
    return value


def area(w: CohomClass, A: HomologyClass) -> Fraction:
    """omega(A) = a*x0 - sum b_i x_i."""
    if w.n != A.n:
        raise DegreeMismatchError(w.n, A.n)
    return A.a * w.x0 - sum((b * x for b, x in zip(A.b, w.x)), Fraction(0))


def square_norm(w: CohomClass) -> Fraction:
    """x0^2 - sum x_i^2, the symplectic volume up to a factor 2."""
    return w.x0 * w.x0 - sum((x * x for x in w.x), Fraction(0))


def smallest_degree(k: int) -> int:
    """Smallest d >= 1 with d(d+3) >= 2k; then also d(d+1) <= 2k."""
    d = 1
    while d * (d + 3) < 2 * k:
        d += 1
    return d
