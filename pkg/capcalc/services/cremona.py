# capcalc/services/cremona.py
"""Cremona symmetry, reduction to the fundamental domain and the c1-nef cone geometry."""
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple
import logging

from capcalc.core.config import settings
from capcalc.core.exceptions import DegreeMismatchError, InvalidIndicesError, OutsideConeError
from capcalc.schemas.classes import CohomClass, HomologyClass
from capcalc.schemas.reduction import ConeVertexSet, CremonaStep, ReductionTrace, SortStep

logger = logging.getLogger(__name__)

ONE_THIRD = Fraction(1, 3)


class Reduction(NamedTuple):
    omega: CohomClass
    trace: ReductionTrace
    boundary: bool


# ==============================================
# RÉFLEXIONS
# ==============================================

def _reflection(n: int, i: int, j: int, k: int) -> CremonaStep:
    if n < 3:
        raise InvalidIndicesError(f"Cremona reflection needs n >= 3, got n={n}")
    labels = (i, j, k)
    if len(set(labels)) != 3:
        raise InvalidIndicesError(f"indices must be distinct: {labels}")
    if min(labels) < 1 or max(labels) > n:
        raise InvalidIndicesError(f"indices {labels} out of range 1..{n}")
    return CremonaStep(ijk=labels)


def reflect_class(A: HomologyClass, i: int = 1, j: int = 2, k: int = 3) -> HomologyClass:
    """A + (A.C) C for C = H - E_i - E_j - E_k."""
    a, b = _reflection(A.n, i, j, k).apply(A.a, A.b)
    return HomologyClass(a=a, b=b)


def reflect_cohom(w: CohomClass, i: int = 1, j: int = 2, k: int = 3) -> CohomClass:
    x0, x = _reflection(w.n, i, j, k).apply(w.x0, w.x)
    return CohomClass(x0=x0, x=x)


# ==============================================
# PRÉDICATS DE CÔNE
# ==============================================

def _is_sorted_desc(x: Sequence[Fraction]) -> bool:
    return all(x[i] >= x[i + 1] for i in range(len(x) - 1))


def _head_sum(x: Sequence[Fraction]) -> Fraction:
    return sum(x[:3], Fraction(0))


def _sum_of_squares(x: Sequence[Fraction]) -> Fraction:
    return sum((v * v for v in x), Fraction(0))


def is_reduced(w: CohomClass) -> bool:
    """Membership in the open fundamental domain P."""
    x0, x, n = w.x0, w.x, w.n
    if x0 <= 0:
        return False
    if n == 0:
        return True
    if x[-1] <= 0 or not _is_sorted_desc(x):
        return False
    if n == 1:
        return x[0] < x0
    if n == 2:
        return x[0] + x[1] < x0
    return _head_sum(x) <= x0 and _sum_of_squares(x) < x0 * x0


def is_reduced_closure(w: CohomClass) -> bool:
    x0, x, n = w.x0, w.x, w.n
    if x0 <= 0:
        return False
    if n == 0:
        return True
    if x[-1] < 0 or not _is_sorted_desc(x):
        return False
    return _head_sum(x) <= x0 and _sum_of_squares(x) <= x0 * x0


def is_c1nef(w: CohomClass) -> bool:
    """omega(3H - E_1 - ... - E_n) > 0"""
    return 3 * w.x0 - sum(w.x, Fraction(0)) > 0


def is_c1nef_closure(w: CohomClass) -> bool:
    return 3 * w.x0 - sum(w.x, Fraction(0)) >= 0


def in_c1nef_domain(w: CohomClass) -> bool:
    return is_reduced(w) and is_c1nef(w)


def _on_boundary(x0: Fraction, x: Sequence[Fraction]) -> bool:
    if not x:
        return False
    if x[-1] == 0 or _head_sum(x) == x0:
        return True
    return _sum_of_squares(x) == x0 * x0


# ==============================================
# RÉDUCTION
# ==============================================

def _bit_size(w: CohomClass) -> int:
    return sum(v.numerator.bit_length() + v.denominator.bit_length() for v in (w.x0,) + w.x)


def _sort_step(x: Tuple[Fraction, ...]) -> Optional[SortStep]:
    order = sorted(range(len(x)), key=lambda i: x[i], reverse=True)
    if order == list(range(len(x))):
        return None
    return SortStep(perm=tuple(i + 1 for i in order))


def iteration_cap(w: CohomClass, iteration_factor: Optional[int] = None) -> int:
    factor = iteration_factor or settings.REDUCE_ITERATION_FACTOR
    return max(settings.REDUCE_MIN_ITERATIONS, factor * _bit_size(w))


def reduce(w: CohomClass, iteration_factor: Optional[int] = None) -> Reduction:
    """Move w into the closure of the fundamental domain by sorting and (1,2,3)-reflections."""
    if w.x0 <= 0:
        raise OutsideConeError()

    cap = iteration_cap(w, iteration_factor)
    steps: List = []
    x0, x = w.x0, tuple(w.x)

    for _ in range(cap):
        sort_step = _sort_step(x)
        if sort_step is not None:
            x0, x = sort_step.apply(x0, x)
            steps.append(sort_step)
            logger.debug(f"sort {sort_step.perm} -> {x0}; {x}")

        if len(x) >= 3 and _head_sum(x) > x0:
            reflection = CremonaStep(ijk=(1, 2, 3))
            x0, x = reflection.apply(x0, x)
            steps.append(reflection)
            logger.debug(f"cremona (1,2,3) -> {x0}; {x}")
            if x0 <= 0:
                raise OutsideConeError()
            continue
        break
    else:
        logger.error(f"❌ reduction of {w} exceeded {cap} iterations")
        raise OutsideConeError()

    if x and (x[-1] < 0 or _head_sum(x) > x0 or _sum_of_squares(x) > x0 * x0):
        raise OutsideConeError()

    boundary = _on_boundary(x0, x)
    omega = CohomClass(x0=x0, x=x)
    if boundary:
        logger.info(f"⚠️ {w} reduces to {omega} on the boundary of the reduced cone")
    return Reduction(omega=omega, trace=ReductionTrace(steps=steps), boundary=boundary)


# ==============================================
# SOMMETS DU CÔNE c1-NEF
# ==============================================

def _coordinate_sum(vertex: Sequence[Fraction]) -> Fraction:
    return sum(vertex, Fraction(0))


def _pattern_vertex(i: int, n: int) -> Tuple[Fraction, ...]:
    """P_i: P_1 = 0, P_2 = (1,0,..), P_3 = (1/2,1/2,0,..), P_i = (1/3 x (i-1), 0,..)."""
    if i == 1:
        filled, value = 0, Fraction(0)
    elif i == 2:
        filled, value = 1, Fraction(1)
    elif i == 3:
        filled, value = 2, Fraction(1, 2)
    else:
        filled, value = i - 1, ONE_THIRD
    return (value,) * filled + (Fraction(0),) * (n - filled)


def _facets(n: int) -> List[Tuple[Tuple[Fraction, ...], Fraction]]:
    """Facet inequalities normal . v <= bound of the closed c1-nef part of P (x0 = 1)."""
    facets = []
    zero = [Fraction(0)] * n
    last = list(zero)
    last[n - 1] = Fraction(-1)
    facets.append((tuple(last), Fraction(0)))
    for i in range(n - 1):
        row = list(zero)
        row[i], row[i + 1] = Fraction(-1), Fraction(1)
        facets.append((tuple(row), Fraction(0)))
    head = list(zero)
    for i in range(min(n, 3)):
        head[i] = Fraction(1)
    facets.append((tuple(head), Fraction(1)))
    facets.append((tuple([Fraction(1)] * n), Fraction(3)))
    return facets


def _rank(rows: List[Tuple[Fraction, ...]]) -> int:
    """Exact row rank by Gaussian elimination over Q."""
    matrix = [list(row) for row in rows]
    rank = 0
    columns = len(matrix[0]) if matrix else 0
    for col in range(columns):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col] != 0:
                ratio = matrix[r][col] / matrix[rank][col]
                matrix[r] = [x - ratio * y for x, y in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


def _is_vertex(point: Tuple[Fraction, ...], facets) -> bool:
    tight = []
    for normal, bound in facets:
        value = sum((c * v for c, v in zip(normal, point)), Fraction(0))
        if value > bound:
            return False
        if value == bound:
            tight.append(normal)
    return _rank(tight) == len(point) if tight else False


@lru_cache(maxsize=32)
def c1nef_vertices(n: int) -> ConeVertexSet:
    """Vertices P_i, and for n >= 10 the cut points Q_ij on the hyperplane sum = 3."""
    if n < 0:
        raise InvalidIndicesError(f"n must be >= 0, got {n}")
    if n == 0:
        return ConeVertexSet(n=0, vertices=(CohomClass(x0=1, x=()),))

    candidates: List[Tuple[str, Tuple[Fraction, ...]]] = []
    for i in range(1, min(n, 9) + 2):
        candidates.append((f"P{i}", _pattern_vertex(i, n)))

    if n >= 10:
        sums = {m: _coordinate_sum(_pattern_vertex(m, n)) for m in range(1, n + 2)}
        for i in range(1, 10):
            for j in range(10, n + 1):
                t = (sums[j + 1] - 3) / (sums[j + 1] - sums[i])
                p_i, p_far = _pattern_vertex(i, n), _pattern_vertex(j + 1, n)
                q = tuple(t * u + (1 - t) * v for u, v in zip(p_i, p_far))
                candidates.append((f"Q{i},{j}", q))

    facets = _facets(n)
    seen = set()
    vertices = []
    for label, point in candidates:
        if point in seen:
            logger.warning(f"⚠️ duplicate c1-nef vertex {label} removed (n={n})")
            continue
        seen.add(point)
        if not _is_vertex(point, facets):
            logger.warning(f"⚠️ redundant c1-nef vertex {label} removed (n={n})")
            continue
        vertices.append(CohomClass(x0=1, x=point))

    logger.debug(f"c1-nef cone n={n}: {len(vertices)} vertices")
    return ConeVertexSet(n=n, vertices=tuple(vertices))


@lru_cache(maxsize=32)
def vertex_tails(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(v.x for v in c1nef_vertices(n).vertices)


# ==============================================
# DOMINANCE
# ==============================================

def values_at_vertices(a: int, b: Sequence[int], tails: Sequence[Sequence[Fraction]]) -> Tuple[Fraction, ...]:
    return tuple(a - sum((c * v for c, v in zip(b, tail)), Fraction(0)) for tail in tails)


def vertex_values(A: HomologyClass) -> Tuple[Fraction, ...]:
    """Areas of A at the vertices of the c1-nef cone (dominance key)."""
    return values_at_vertices(A.a, A.b, vertex_tails(A.n))


def dominates(A: HomologyClass, B: HomologyClass) -> bool:
    """A >= B: omega(A) >= omega(B) on the whole c1-nef cone."""
    if A.n != B.n:
        raise DegreeMismatchError(A.n, B.n)
    return all(u >= v for u, v in zip(vertex_values(A), vertex_values(B)))
