# capcalc/services/capacity.py
"""f_k as the minimum symplectic area over U5, exceptional classes and the U2 surrogate."""
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, List, Optional, Sequence, Tuple
import logging
import threading

from capcalc.core.config import Settings, settings
from capcalc.core.exceptions import InvalidInputError, OutsideConeError, UnsupportedError
from capcalc.schemas.capacity import BlowupTerm, CapacityResult
from capcalc.schemas.classes import CohomClass, HomologyClass, to_fraction
from capcalc.services import cremona
from capcalc.services.lattice import index, intersect, self_intersection, smallest_degree, square_norm

logger = logging.getLogger(__name__)

MAX_EXCEPTIONAL_N = 8


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidInputError(f"k must be a positive integer, got {k!r}")


# ==============================================
# ENSEMBLES U5 / U2
# ==============================================

def in_U5(A: HomologyClass, k: int) -> bool:
    """ind(A) >= 2k and A.H > 0"""
    _check_k(k)
    return A.a >= 1 and index(A) >= 2 * k


@lru_cache(maxsize=16)
def _exceptional_classes(n: int) -> Tuple[HomologyClass, ...]:
    found: List[HomologyClass] = []
    # Cauchy-Schwarz on sum b = 3a - 1 and sum b^2 = a^2 + 1 gives (9 - n) a^2 - 6a + 1 - n <= 0
    a_values = [a for a in range(-n - 2, 2 * n + 3) if (9 - n) * a * a - 6 * a + 1 - n <= 0]

    def extend(prefix: List[int], squares_left: int, sum_left: int) -> Iterable[Tuple[int, ...]]:
        slots = n - len(prefix)
        if slots == 0:
            if squares_left == 0 and sum_left == 0:
                yield tuple(prefix)
            return
        bound = isqrt(squares_left)
        for b in range(-bound, bound + 1):
            rest_squares = squares_left - b * b
            rest_sum = sum_left - b
            if rest_sum * rest_sum > (slots - 1) * rest_squares:
                continue
            prefix.append(b)
            yield from extend(prefix, rest_squares, rest_sum)
            prefix.pop()

    for a in a_values:
        for b in extend([], a * a + 1, 3 * a - 1):
            found.append(HomologyClass(a=a, b=b))

    found.sort(key=HomologyClass.sort_key)
    logger.debug(f"{len(found)} exceptional classes for n={n}")
    return tuple(found)


def enumerate_exceptional(n: int) -> List[HomologyClass]:
    """All E with E.E = -1 and K0.E = -1, for 0 <= n <= 8."""
    if n < 0:
        raise InvalidInputError(f"n must be >= 0, got {n}")
    if n > MAX_EXCEPTIONAL_N:
        raise UnsupportedError("exceptional set infinite; unsupported")
    return list(_exceptional_classes(n))


def in_U2(A: HomologyClass, k: int) -> bool:
    """U5 plus A.A >= 0 and A.E >= 0 for every exceptional class E (n <= 8)."""
    if A.n > MAX_EXCEPTIONAL_N:
        raise UnsupportedError("exceptional set infinite; unsupported")
    if k < 1:
        return False
    if not in_U5(A, k) or self_intersection(A) < 0:
        return False
    return all(intersect(A, E) >= 0 for E in _exceptional_classes(A.n))


# ==============================================
# BRANCH-AND-BOUND
# ==============================================

class _AreaSearch:
    """Exact minimisation of a*x0 - sum b_i x_i subject to index >= 2k.

    x must be sorted descending and non-negative, with x0^2 > sum x_i^2.
    Candidates have a >= 1 and b sorted descending, b >= 0; with reduced_only
    also a >= b_1 + b_2 + b_3.
    """

    def __init__(self, x0: Fraction, x: Sequence[Fraction], k: int, reduced_only: bool):
        self.x0 = x0
        self.x = tuple(x)
        self.n = len(self.x)
        self.k = k
        self.reduced_only = reduced_only
        self.tail_squares = [Fraction(0)] * (self.n + 1)
        for i in range(self.n - 1, -1, -1):
            self.tail_squares[i] = self.tail_squares[i + 1] + self.x[i] * self.x[i]
        self.norm_squared = self.tail_squares[0]

        self.first_level = smallest_degree(k)
        self._lock = threading.Lock()
        self._incumbent = self.first_level * x0

    @property
    def incumbent(self) -> Fraction:
        with self._lock:
            return self._incumbent

    def _offer(self, value: Fraction) -> None:
        with self._lock:
            if value < self._incumbent:
                self._incumbent = value

    def exhausted(self, a: int, incumbent: Fraction) -> bool:
        """No level >= a can reach the incumbent: a*x0 - (a + 3/2)|x| > incumbent."""
        gap = a * self.x0 - incumbent
        return gap > 0 and gap * gap > Fraction(2 * a + 3, 2) ** 2 * self.norm_squared

    def last_level(self) -> int:
        a = self.first_level
        incumbent = self.incumbent
        while not self.exhausted(a, incumbent):
            a += 1
        return a - 1

    def level(self, a: int) -> Tuple[Optional[Fraction], List[Tuple[int, ...]]]:
        budget = a * a + 3 * a - 2 * self.k
        if budget < 0:
            return None, []

        best: List[Optional[Fraction]] = [None]
        found: List[Tuple[int, ...]] = []
        prefix: List[int] = []
        x, n, tail_squares = self.x, self.n, self.tail_squares

        def bound() -> Fraction:
            current = self.incumbent
            if best[0] is not None and best[0] < current:
                return best[0]
            return current

        def visit(i: int, cap: int, head_room: int, room: int, value: Fraction) -> None:
            gap = value - bound()
            if gap > 0 and gap * gap > room * tail_squares[i]:
                return
            if i == n:
                if best[0] is None or value < best[0]:
                    best[0] = value
                    found.clear()
                    self._offer(value)
                if value == best[0]:
                    found.append(tuple(prefix))
                return
            top = min(cap, (isqrt(4 * room + 1) - 1) // 2)
            if self.reduced_only and i < 3:
                top = min(top, head_room)
            for b in range(top, -1, -1):
                prefix.append(b)
                visit(i + 1, b, head_room - b, room - b * (b + 1), value - b * x[i])
                prefix.pop()

        visit(0, budget, a, budget, a * self.x0)
        logger.debug(f"level a={a}: budget={budget} best={best[0]} ties={len(found)}")
        return best[0], found

    def run(self, max_workers: int = 1) -> Tuple[Fraction, List[Tuple[int, Tuple[int, ...]]]]:
        results = {}
        if max_workers > 1:
            last = self.last_level()
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                futures = {pool.submit(self.level, a): a for a in range(1, last + 1)}
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
        else:
            a = 1
            while not self.exhausted(a, self.incumbent):
                results[a] = self.level(a)
                a += 1

        value = min(best for best, _ in results.values() if best is not None)
        witnesses = sorted(
            (a, b) for a, (best, ties) in results.items() if best == value for b in ties
        )
        return value, witnesses


def minimum_area(
    x0: Fraction, x: Sequence[Fraction], k: int, reduced_only: bool = True, max_workers: int = 1
) -> Tuple[Fraction, List[Tuple[int, Tuple[int, ...]]]]:
    """Shared core of capacity_fk and the ECH weight formula."""
    _check_k(k)
    x = tuple(to_fraction(v) for v in x)
    x0 = to_fraction(x0)
    if x0 <= 0 or any(v < 0 for v in x) or any(x[i] < x[i + 1] for i in range(len(x) - 1)):
        raise InvalidInputError("area search needs x0 > 0 and a non-negative descending tail")
    if x0 * x0 - sum((v * v for v in x), Fraction(0)) <= 0:
        raise OutsideConeError()
    return _AreaSearch(x0, x, k, reduced_only).run(max_workers)


# ==============================================
# SERVICE
# ==============================================

class CapacityService:
    def __init__(self, config: Settings = settings):
        self.config = config
        self.max_workers = config.CAPCALC_THREADS
        logger.info(f"Capacity service initialized (workers={self.max_workers})")

    def capacity_fk(self, w: CohomClass, k: int) -> CapacityResult:
        """f_k(X, [w]) with all reduced optimal classes."""
        _check_k(k)
        reduction = cremona.reduce(w)
        omega = reduction.omega
        if square_norm(omega) <= 0:
            raise OutsideConeError()

        value, raw = minimum_area(omega.x0, omega.x, k, reduced_only=True, max_workers=self.max_workers)
        witnesses = tuple(HomologyClass(a=a, b=b) for a, b in raw)
        logger.info(f"f_{k}({w}) = {value} ({len(witnesses)} witness(es))")
        return CapacityResult(
            k=k,
            value=value,
            witnesses=witnesses,
            omega_reduced=omega,
            trace=reduction.trace,
            boundary=reduction.boundary,
        )

    def capacities(self, w: CohomClass, ks: Iterable[int]) -> List[CapacityResult]:
        return [self.capacity_fk(w, k) for k in ks]

    def blowup_sequence(self, w: CohomClass, k: int, m_max: int = 12) -> List[BlowupTerm]:
        """f_k after blowing up a ball of size 1/2^m, m = 1..m_max."""
        terms = []
        for m in range(1, m_max + 1):
            eps = Fraction(1, 2 ** m)
            value = self.capacity_fk(w.blowup(eps), k).value
            terms.append(BlowupTerm(eps=eps, value=value))
        return terms


capacity_service = CapacityService()


def capacity_fk(w: CohomClass, k: int) -> CapacityResult:
    return capacity_service.capacity_fk(w, k)
