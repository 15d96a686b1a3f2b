# capcalc/services/corpus.py
"""Named Delzant polygons used by `verify` and the toric tests."""
from functools import lru_cache
from typing import Dict, List, Optional

from capcalc.core.exceptions import InvalidInputError
from capcalc.schemas.toric import Polygon
from capcalc.services.toric import chop_corner, rectangle, standard_triangle


def _chopped(size: int, *chops) -> Polygon:
    polygon = standard_triangle(size)
    for vertex, amount in chops:
        polygon = chop_corner(polygon, vertex, amount)
    return polygon


@lru_cache(maxsize=1)
def delzant_corpus() -> Dict[str, Polygon]:
    corpus = {
        "T(1)": standard_triangle(1),
        "T(2)": standard_triangle(2),
        "T(5)": standard_triangle(5),
        "T(7)": standard_triangle(7),
        "unit square": rectangle(1, 1),
        "rectangle 2x1": rectangle(2, 1),
        "rectangle 3x2": rectangle(3, 2),
        "rectangle 3/2x1/2": rectangle("3/2", "1/2"),
        "T(5) chop 2": _chopped(5, ((0, 5), 2)),
        "T(5) chop 2,1": _chopped(5, ((0, 5), 2), ((5, 0), 1)),
        "T(7) chop 3,2,1": _chopped(7, ((0, 7), 3), ((7, 0), 2), ((0, 0), 1)),
        "T(3) hexagon": _chopped(3, ((0, 0), 1), ((3, 0), 1), ((0, 3), 1)),
        # corners (0,7) and (7,0) of T(7) chopped twice each
        "T(7) chop 3,1 and 2,1": _chopped(7, ((0, 7), 3), ((0, 4), 1), ((7, 0), 2), ((5, 0), 1)),
        # no edge of slope -1; weights 8;5;3,3
        "quadrilateral 3x(2..5)": Polygon.from_points([(0, 0), (3, 0), (3, 5), (0, 2)]),
    }
    return corpus


def corpus_names() -> List[str]:
    return list(delzant_corpus())


def select(names: Optional[List[str]] = None) -> Dict[str, Polygon]:
    """Subset of the corpus by name; everything when names is empty."""
    corpus = delzant_corpus()
    if not names:
        return dict(corpus)
    unknown = [name for name in names if name not in corpus]
    if unknown:
        raise InvalidInputError(f"unknown corpus polygon(s): {', '.join(unknown)}")
    return {name: corpus[name] for name in names}


# minimizer sets of f_1..f_8 on CP^2 # (-CP^2), as (a, b_1) pairs
KNOWN_TERMS_N1 = {
    1: {(1, 1)},
    2: {(2, 2), (1, 0)},
    3: {(3, 3), (2, 1)},
    4: {(4, 4), (2, 1)},
    5: {(5, 5), (3, 2), (2, 0)},
    6: {(6, 6), (3, 2)},
    7: {(7, 7), (4, 3), (3, 1)},
    8: {(8, 8), (4, 3), (3, 1)},
}
