# capcalc/services/tropical.py
"""Finite minimizer sets of f_k on the c1-nef cone and their tropical evaluation."""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import ceil, factorial, isqrt
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from capcalc.core.config import Settings, settings
from capcalc.core.exceptions import (
    DegreeMismatchError,
    InvalidInputError,
    OutsideDomainError,
    UncertifiedError,
    UnsupportedError,
)
from capcalc.schemas.classes import CohomClass, HomologyClass, to_fraction
from capcalc.schemas.tropical import BoundCertificate, TropicalCapacity
from capcalc.services import cremona
from capcalc.services.lattice import area, smallest_degree

logger = logging.getLogger(__name__)

Candidate = Tuple[int, Tuple[int, ...]]


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InvalidInputError(f"k must be a positive integer, got {k!r}")


# ==============================================
# CERTIFICAT
# ==============================================

def _q_weight(n: int) -> Fraction:
    """min over Q_2l, Q_3l of min(t, (1-t)/3); t = (l/3 - 3)/(l/3 - 1)."""
    weights = []
    for l in range(10, n + 1):
        s_far = Fraction(l, 3)
        t = (s_far - 3) / (s_far - 1)
        weights.append(min(t, (1 - t) / 3))
    return min(weights)


def certificate(n: int, k: int, work_limit: Optional[int] = None) -> BoundCertificate:
    """Instantiate the dominance constants and the resulting bound on a."""
    _check_k(k)
    if n < 0:
        raise InvalidInputError(f"n must be >= 0, got {n}")
    work_limit = work_limit or settings.TROPICAL_WORK_LIMIT

    if n == 0:
        d = smallest_degree(k)
        return BoundCertificate(n=0, k=k, C=Fraction(0), D=Fraction(0), A=d, a_max=d, work=d, practical=True)

    reference = HomologyClass(a=k, b=(k,) + (0,) * (n - 1))
    C = 3 * max(cremona.vertex_values(reference))
    eps = None
    if n <= 9:
        A = k
    else:
        eps = _q_weight(n)
        M = (C / 3) / eps
        A = max(k, ceil((M + (n - 2) * M / 2) / 2))

    D = 4 * C
    if n <= 8:
        chain = D
    else:
        chain = D + 12 * D * D + 3 * k
    a_max = max(A, ceil(chain))

    free = max(n - 1, 1)
    work = a_max ** free // factorial(free)
    practical = work <= work_limit
    cert = BoundCertificate(n=n, k=k, C=C, D=D, A=A, eps=eps, a_max=a_max, work=work, practical=practical)
    logger.info(f"certificate n={n} k={k}: C={C} D={D} A={A} a_max={a_max} practical={practical}")
    return cert


def certify_bound(n: int, k: int) -> int:
    """Every dominance-minimal class of U5 has a <= certify_bound(n, k)."""
    return certificate(n, k).a_max


# ==============================================
# CANDIDATS
# ==============================================

class _CandidateLevel:
    """Reduced classes aH - sum b_i E_i surviving the elimination rules at a fixed a.

    R1  b sorted descending, b >= 0, b_1 + b_2 + b_3 <= a
    R2  3a - sum b >= 1
    R3  A - (3H - E_1 - .. - E_min(n,9)) leaves U5 (otherwise it sits below A)
    plus: A - E_n leaves U5, and past the threshold A the class does not sit above kH - kE_1.
    """

    def __init__(self, n: int, k: int, cert: BoundCertificate):
        self.n = n
        self.k = k
        self.C = cert.C
        self.A = cert.A

    def generate(self, a: int) -> List[Candidate]:
        n, k = self.n, self.k
        budget = a * a + 3 * a - 2 * k
        if budget < 0:
            return []
        if n == 0:
            return [(a, ())] if budget < 2 * a + 2 or a == 1 else []

        past_threshold = a > self.A
        needed_head_sum = 3 * a - self.C if past_threshold else None
        found: List[Candidate] = []
        prefix: List[int] = []
        front = min(n, 9)

        def visit(i: int, cap: int, head_room: int, room: int, total: int, front_sum: int) -> None:
            slots = n - i
            if room - slots * cap * (cap + 1) >= 2 * cap + 2:
                return
            if needed_head_sum is not None and i < front:
                if front_sum + (front - i) * cap < needed_head_sum:
                    return
            top = min(cap, (isqrt(4 * room + 1) - 1) // 2, 3 * a - 1 - total)
            if i < 3:
                top = min(top, head_room)
            if top < 0:
                return
            if i == n - 1:
                b = top
                slack = room - b * (b + 1)
                if slack >= 2 * b + 2:
                    return
                self._accept(a, tuple(prefix) + (b,), budget - slack, found)
                return
            for b in range(top, -1, -1):
                prefix.append(b)
                visit(
                    i + 1,
                    b,
                    head_room - b,
                    room - b * (b + 1),
                    total + b,
                    front_sum + (b if i < front else 0),
                )
                prefix.pop()

        visit(0, budget, a, budget, 0, 0)
        return found

    def _accept(self, a: int, b: Tuple[int, ...], used: int, found: List[Candidate]) -> None:
        n, k = self.n, self.k
        index = a * a + 3 * a - used
        front_sum = sum(b[:9])
        if a > self.A and 3 * a - front_sum > self.C:
            return
        if a >= 4 and index - 2 * (3 * a - front_sum) >= 2 * k:
            return
        if 3 * a - sum(b) < 1:
            return
        found.append((a, b))


def _antichain(candidates: Sequence[Candidate], tails) -> List[Candidate]:
    """Dominance-minimal elements; anything below a candidate has a smaller value sum."""
    keyed = []
    for a, b in candidates:
        values = cremona.values_at_vertices(a, b, tails)
        keyed.append((sum(values), (a,) + b, values, (a, b)))
    keyed.sort(key=lambda item: (item[0], item[1]))

    kept: List[Tuple[Tuple[Fraction, ...], Candidate]] = []
    for _, _, values, candidate in keyed:
        if any(all(u <= v for u, v in zip(other, values)) for other, _ in kept):
            continue
        kept.append((values, candidate))
    return sorted((candidate for _, candidate in kept), key=lambda c: (c[0],) + c[1])


# ==============================================
# SERVICE
# ==============================================

class TropicalService:
    def __init__(self, config: Settings = settings):
        self.config = config
        self.max_workers = config.CAPCALC_THREADS
        self.work_limit = config.TROPICAL_WORK_LIMIT
        self._cache: Dict[Tuple[int, int, int, bool], TropicalCapacity] = {}
        logger.info(f"Tropical service initialized (workers={self.max_workers})")

    def certificate(self, n: int, k: int) -> BoundCertificate:
        return certificate(n, k, self.work_limit)

    def minimizer_set(self, n: int, k: int, budget: Optional[int] = None) -> TropicalCapacity:
        """Antichain of dominance-minimal reduced classes of U5."""
        _check_k(k)
        cert = self.certificate(n, k)
        if budget is not None and budget < 1:
            raise InvalidInputError(f"budget must be >= 1, got {budget}")

        if cert.practical:
            a_limit, certified = max(cert.a_max, budget or 0), True
        elif budget is not None:
            a_limit, certified = budget, False
            logger.warning(
                f"⚠️ n={n} k={k}: certified bound a_max={cert.a_max} is impractical, "
                f"enumerating up to budget {budget} without certificate"
            )
        else:
            raise UncertifiedError(
                f"neither certificate nor budget available for n={n}, k={k} (a_max={cert.a_max})"
            )

        key = (n, k, a_limit, certified)
        if key in self._cache:
            return self._cache[key]

        level = _CandidateLevel(n, k, cert)
        levels = range(1, a_limit + 1)
        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                batches = list(pool.map(level.generate, levels))
        else:
            batches = [level.generate(a) for a in levels]
        candidates = [candidate for batch in batches for candidate in batch]

        terms = _antichain(candidates, cremona.vertex_tails(n))
        logger.info(f"n={n} k={k}: {len(candidates)} candidates -> {len(terms)} terms (certified={certified})")
        result = TropicalCapacity(
            n=n,
            k=k,
            terms=tuple(HomologyClass(a=a, b=b) for a, b in terms),
            certified=certified,
            a_max=a_limit,
        )
        self._cache[key] = result
        return result

    def eval(self, tp: TropicalCapacity, w: CohomClass) -> Fraction:
        """min over the terms of omega(term)."""
        if w.n != tp.n:
            raise DegreeMismatchError(tp.n, w.n)
        if not cremona.in_c1nef_domain(w):
            if tp.certified:
                raise OutsideDomainError(f"{w} is outside the c1-nef part of the reduced cone")
            logger.warning(f"⚠️ evaluating uncertified f_{tp.k} outside the c1-nef domain at {w}")
        return min(area(w, term) for term in tp.terms)

    def breakpoints(self, tp: TropicalCapacity, lo: Fraction = Fraction(0), hi: Fraction = Fraction(1)) -> List[Fraction]:
        """Kinks of x -> f_k(1 | x) inside (lo, hi), from pairwise term intersections."""
        if tp.n != 1:
            raise UnsupportedError("breakpoints are only defined for n = 1")
        lo, hi = to_fraction(lo), to_fraction(hi)
        points = set()
        terms = tp.terms
        for i, first in enumerate(terms):
            for second in terms[i + 1:]:
                if first.b[0] == second.b[0]:
                    continue
                x = Fraction(first.a - second.a, first.b[0] - second.b[0])
                if not lo < x < hi:
                    continue
                value = first.a - first.b[0] * x
                if min(term.a - term.b[0] * x for term in terms) == value:
                    points.add(x)
        return sorted(points)


tropical_service = TropicalService()


def minimizer_set(n: int, k: int, budget: Optional[int] = None) -> TropicalCapacity:
    return tropical_service.minimizer_set(n, k, budget)


def eval(tp: TropicalCapacity, w: CohomClass) -> Fraction:
    return tropical_service.eval(tp, w)


# ==============================================
# FAMILLE NON c1-NEF (n = 10)
# ==============================================

def non_c1nef_class(a: int) -> HomologyClass:
    """N_a = (3H - E_1..E_8) + T_a (3H - E_1..E_9) - a E_10 with T_a = (a^2 + a)/2."""
    if a < 1:
        raise InvalidInputError(f"a must be >= 1, got {a}")
    t = (a * a + a) // 2
    return HomologyClass(a=3 + 3 * t, b=(1 + t,) * 8 + (t, a))


def non_c1nef_point(a: int, eps) -> CohomClass:
    """(1 | (1 - eps)/3 x 9, (3a + 4) eps), reduced for small eps but not c1-nef."""
    eps = to_fraction(eps)
    return CohomClass(x0=1, x=((1 - eps) / 3,) * 9 + ((3 * a + 4) * eps,))


def separating_epsilon(a: int, max_halvings: int = 64) -> Fraction:
    """An eps = 1/2^m with omega_a reduced and N_{a+1} strictly below N_1..N_a there."""
    targets = [non_c1nef_class(j) for j in range(1, a + 1)]
    challenger = non_c1nef_class(a + 1)
    for m in range(1, max_halvings + 1):
        eps = Fraction(1, 2 ** m)
        w = non_c1nef_point(a, eps)
        if not cremona.is_reduced(w):
            continue
        if area(w, challenger) < min(area(w, N) for N in targets):
            logger.debug(f"a={a}: separating eps=1/2^{m}")
            return eps
    raise UnsupportedError(f"no separating eps found for a={a} within {max_halvings} halvings")
