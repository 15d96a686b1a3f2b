# capcalc/services/toric.py
"""Toric domains: Delzant polygons, weight sequences and ECH capacities."""
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple
import logging

from capcalc.core.config import Settings, settings
from capcalc.core.exceptions import ExpansionError, InvalidInputError, NotDelzantError
from capcalc.schemas.classes import CohomClass, to_fraction
from capcalc.schemas.toric import Point, Polygon, PolygonCapacityRow, WeightSequence, cross
from capcalc.services import cremona
from capcalc.services.capacity import CapacityService, capacity_service, minimum_area
from capcalc.services.lattice import smallest_degree

logger = logging.getLogger(__name__)

ORIGIN: Point = (Fraction(0), Fraction(0))


# ==============================================
# GÉOMÉTRIE ENTIÈRE
# ==============================================

def primitive(vector: Point) -> Tuple[int, int]:
    """Primitive integer vector pointing along a non-zero rational vector."""
    dx, dy = to_fraction(vector[0]), to_fraction(vector[1])
    if dx == 0 and dy == 0:
        raise InvalidInputError("zero edge vector")
    scale = lcm(dx.denominator, dy.denominator)
    x, y = int(dx * scale), int(dy * scale)
    g = gcd(x, y)
    return x // g, y // g


def lattice_length(start: Point, end: Point) -> Fraction:
    """lambda with end - start = lambda * primitive direction."""
    dx = to_fraction(end[0]) - to_fraction(start[0])
    dy = to_fraction(end[1]) - to_fraction(start[1])
    u = primitive((dx, dy))
    return dx / u[0] if u[0] != 0 else dy / u[1]


def polygon_area(p: Polygon) -> Fraction:
    """Shoelace formula."""
    total = Fraction(0)
    for start, end in p.edges():
        total += cross(start, end)
    return total / 2


def _corner_frame(p: Polygon, i: int) -> Tuple[Point, Tuple[int, int], Tuple[int, int]]:
    """Vertex i with the primitive directions u (to the next vertex) and w (to the previous one)."""
    previous, vertex, following = p.corner(i)
    u = primitive((following[0] - vertex[0], following[1] - vertex[1]))
    w = primitive((previous[0] - vertex[0], previous[1] - vertex[1]))
    return vertex, u, w


def _is_unimodular(u: Tuple[int, int], w: Tuple[int, int]) -> bool:
    return abs(u[0] * w[1] - u[1] * w[0]) == 1


def is_delzant(p: Polygon) -> bool:
    """Every corner spanned by primitive edge vectors of determinant +-1."""
    for i in range(p.size):
        vertex, u, w = _corner_frame(p, i)
        if not _is_unimodular(u, w):
            logger.debug(f"corner {vertex} is not unimodular (u={u}, w={w})")
            return False
    return True


def is_standard_position(p: Polygon) -> bool:
    """Vertex at the origin with its two edges along the positive axes."""
    if ORIGIN not in p.vertices:
        return False
    _, u, w = _corner_frame(p, p.vertices.index(ORIGIN))
    return u == (1, 0) and w == (0, 1)


def _corner_images(p: Polygon, i: int) -> List[Tuple[Point, ...]]:
    vertex, u, w = _corner_frame(p, i)
    if not _is_unimodular(u, w):
        return []
    det = u[0] * w[1] - u[1] * w[0]
    # inverse of the matrix with columns u, w
    inverse = ((w[1] * det, -w[0] * det), (-u[1] * det, u[0] * det))

    shifted = [(x - vertex[0], y - vertex[1]) for x, y in p.vertices]
    mapped = [
        (inverse[0][0] * x + inverse[0][1] * y, inverse[1][0] * x + inverse[1][1] * y) for x, y in shifted
    ]
    m = p.size
    straight = tuple(mapped[(i + j) % m] for j in range(m))
    swapped = [(y, x) for x, y in mapped]
    mirrored = tuple(swapped[(i - j) % m] for j in range(m))
    return [straight, mirrored]


def normalize(p: Polygon) -> Polygon:
    """Integral affine image in standard position; lexicographically smallest over all corners."""
    images = []
    for i in range(p.size):
        images.extend(_corner_images(p, i))
    if not images:
        raise NotDelzantError(f"no unimodular corner in {p}")
    return Polygon.from_points(min(images))


# ==============================================
# CONSTRUCTEURS
# ==============================================

def standard_triangle(a) -> Polygon:
    """T(a) = conv{(0,0), (a,0), (0,a)}."""
    a = to_fraction(a)
    if a <= 0:
        raise InvalidInputError(f"triangle size must be positive, got {a}")
    return Polygon.from_points([(0, 0), (a, 0), (0, a)])


def rectangle(width, height) -> Polygon:
    width, height = to_fraction(width), to_fraction(height)
    if width <= 0 or height <= 0:
        raise InvalidInputError(f"rectangle sides must be positive, got {width} x {height}")
    return Polygon.from_points([(0, 0), (width, 0), (width, height), (0, height)])


def chop_corner(p: Polygon, vertex, size) -> Polygon:
    """Cut a standard triangle of lattice size `size` off a unimodular corner."""
    size = to_fraction(size)
    i = p.index_of(vertex)
    previous, v, following = p.corner(i)
    _, u, w = _corner_frame(p, i)
    if not _is_unimodular(u, w):
        raise NotDelzantError(f"corner {v} is not unimodular")
    if size <= 0:
        raise InvalidInputError(f"chop size must be positive, got {size}")
    if size >= lattice_length(v, following) or size >= lattice_length(v, previous):
        raise InvalidInputError(f"chop of size {size} does not fit at corner {v}")

    cut = [(v[0] + size * w[0], v[1] + size * w[1]), (v[0] + size * u[0], v[1] + size * u[1])]
    points = list(p.vertices[:i]) + cut + list(p.vertices[i + 1:])
    return Polygon.from_points(points)


# ==============================================
# SÉQUENCE DE POIDS
# ==============================================

def _touching(points: Sequence[Point], level: Fraction) -> Tuple[int, int]:
    hits = [j for j, (x, y) in enumerate(points) if x + y == level]
    return hits[0], hits[-1]


class _ConcaveExpansion:
    """Weights of the region between the axes and a convex polyline from (0, h) to (w, 0).

    Take the largest standard triangle under the polyline, then expand the two
    pieces left between its hypotenuse and the polyline.
    """

    def __init__(self, max_steps: int):
        self.max_steps = max_steps
        self.steps = 0

    def run(self, polyline: Sequence[Point]) -> List[Fraction]:
        weights: List[Fraction] = []
        stack = [list(polyline)]
        while stack:
            points = stack.pop()
            height, width = points[0][1], points[-1][0]
            if height == 0 or width == 0:
                continue
            self.steps += 1
            if self.steps > self.max_steps:
                raise ExpansionError(f"weight expansion exceeded {self.max_steps} steps")

            t = min(x + y for x, y in points)
            first, last = _touching(points, t)
            weights.append(t)
            logger.debug(f"expansion step {self.steps}: triangle {t} under {len(points)} points")

            upper = [(x, x + y - t) for x, y in points[: first + 1]]
            lower = [(x + y - t, y) for x, y in points[last:]]
            stack.append(lower)
            stack.append(upper)
        return sorted(weights, reverse=True)


def weight_sequence(p: Polygon, max_steps: Optional[int] = None) -> WeightSequence:
    """Head triangle of the convex domain plus the weights of its two concave complements."""
    if not is_standard_position(p):
        p = normalize(p)
    max_steps = max_steps or settings.WEIGHT_EXPANSION_MAX_STEPS

    m = p.size
    start = p.vertices.index(ORIGIN)
    # outer chain from (w, 0) counterclockwise to (0, h)
    chain = [p.vertices[(start + j) % m] for j in range(1, m)]
    head = max(x + y for x, y in chain)
    first, last = _touching(chain, head)

    expansion = _ConcaveExpansion(max_steps)
    near_x_axis = [(head - x - y, y) for x, y in reversed(chain[: first + 1])]
    near_y_axis = [(x, head - x - y) for x, y in reversed(chain[last:])]
    left = expansion.run(near_x_axis)
    right = expansion.run(near_y_axis)

    weights = WeightSequence(head=head, left=tuple(left), right=tuple(right))
    logger.info(f"weight sequence of {p}: {weights} ({expansion.steps} steps)")
    return weights


# ==============================================
# CAPACITÉS
# ==============================================

def ball_capacity(a, k: int) -> Fraction:
    """c_k(B(a)) = d*a with d(d+1) <= 2k <= d(d+3); c_0 = 0."""
    a = to_fraction(a)
    if a <= 0:
        raise InvalidInputError(f"ball size must be positive, got {a}")
    if k < 0:
        raise InvalidInputError(f"k must be >= 0, got {k}")
    if k == 0:
        return Fraction(0)
    return smallest_degree(k) * a


def reduce_weights(w: WeightSequence) -> cremona.Reduction:
    return cremona.reduce(CohomClass(x0=w.head, x=w.left + w.right))


def weights_to_class(w: WeightSequence) -> CohomClass:
    """The reduced symplectic class of the toric surface with weights w."""
    return reduce_weights(w).omega


class ToricService:
    def __init__(self, config: Settings = settings, capacity: Optional[CapacityService] = None):
        self.config = config
        self.capacity = capacity or capacity_service
        self.max_workers = config.CAPCALC_THREADS
        self.max_steps = config.WEIGHT_EXPANSION_MAX_STEPS
        logger.info("Toric service initialized")

    def weight_sequence(self, p: Polygon) -> WeightSequence:
        return weight_sequence(p, self.max_steps)

    def ech_capacity(self, w: WeightSequence, k: int) -> Fraction:
        """min x*head - sum y_i * tail_i over x(x+3) - sum y_i(y_i+1) >= 2k."""
        if k == 0:
            return Fraction(0)
        value, _ = minimum_area(w.head, w.tails, k, reduced_only=False, max_workers=self.max_workers)
        return value

    def capacities_of_polygon(
        self, p: Polygon, ks: Iterable[int], crosscheck: bool = False
    ) -> List[PolygonCapacityRow]:
        if crosscheck and not is_delzant(p):
            raise NotDelzantError(f"crosscheck needs a Delzant polygon: {p}")
        weights = self.weight_sequence(p)
        omega = weights_to_class(weights) if crosscheck else None

        rows = []
        for k in ks:
            ech = self.ech_capacity(weights, k)
            if omega is None:
                rows.append(PolygonCapacityRow(k=k, ech=ech))
                continue
            fk = self.capacity.capacity_fk(omega, k).value
            equal = ech == fk
            if not equal:
                logger.warning(f"⚠️ mismatch at k={k} for {p}: ech={ech} f_k={fk}")
            rows.append(PolygonCapacityRow(k=k, ech=ech, fk=fk, equal=equal))
        return rows


toric_service = ToricService()


def ech_capacity(w: WeightSequence, k: int) -> Fraction:
    return toric_service.ech_capacity(w, k)


def capacities_of_polygon(p: Polygon, ks: Iterable[int], crosscheck: bool = False) -> List[PolygonCapacityRow]:
    return toric_service.capacities_of_polygon(p, ks, crosscheck)
