# capcalc/test_lattice.py
import sys
import os
import random
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from capcalc.core.exceptions import DegreeMismatchError, InvalidInputError
from capcalc.schemas.classes import CohomClass, HomologyClass, format_fraction, to_fraction
from capcalc.services.lattice import (
    area,
    canonical_class,
    canonical_pairing,
    index,
    index_formula,
    intersect,
    self_intersection,
    smallest_degree,
    square_norm,
)


def test_canonical_class():
    K = canonical_class(3)
    assert K.a == -3 and K.b == (-1, -1, -1)
    assert self_intersection(K) == 9 - 3


def test_exceptional_class():
    E = HomologyClass.exceptional(1, 1)
    assert self_intersection(E) == -1
    assert canonical_pairing(E) == -1
    assert index(E) == 0


def test_index_values():
    assert index(HomologyClass.of(1, 1)) == 2
    assert index(HomologyClass.line(0)) == 4
    assert index(HomologyClass.of(4, 3)) == 16 + 12 - 12
    assert index(HomologyClass.of(5, 5)) == 10


def test_index_matches_quadratic_form():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(0, 6)
        A = HomologyClass(a=rng.randint(-5, 12), b=tuple(rng.randint(-4, 6) for _ in range(n)))
        assert index(A) == index_formula(A.a, A.b)
        assert index(A) == self_intersection(A) - canonical_pairing(A)


def test_area():
    w = CohomClass.of(7, 3, 2, 1, 1)
    assert area(w, HomologyClass.of(1, 1, 0, 0, 0)) == 4
    assert area(CohomClass.of(1, "1/2"), HomologyClass.of(3, 2)) == 2
    assert square_norm(CohomClass.of(5, 2, 0, 0)) == 21


def test_degree_mismatch():
    try:
        intersect(HomologyClass.of(1, 1), HomologyClass.of(1, 1, 0))
    except DegreeMismatchError as e:
        assert "degree mismatch" in e.message
    else:
        raise AssertionError("mismatched degrees accepted")

    try:
        area(CohomClass.of(1, 0), HomologyClass.of(1))
    except DegreeMismatchError:
        pass
    else:
        raise AssertionError("mismatched degrees accepted")


def test_arithmetic():
    A = HomologyClass.of(3, 1, 1)
    B = HomologyClass.of(1, 1, 0)
    assert A + B == HomologyClass.of(4, 2, 1)
    assert A - B == HomologyClass.of(2, 0, 1)
    assert -B == HomologyClass.of(-1, -1, 0)
    assert B.scale(3) == HomologyClass.of(3, 3, 0)
    assert HomologyClass.zero(2) == HomologyClass.of(0, 0, 0)


def test_text_forms():
    A = HomologyClass.parse("4;3")
    assert A.a == 4 and A.b == (3,)
    assert str(A) == "4;3"
    assert A.pretty() == "4H-3E1"
    assert HomologyClass.of(2, 0).pretty() == "2H"
    assert HomologyClass.exceptional(2, 2).pretty() == "E2"

    w = CohomClass.parse("1;1/2")
    assert w.x0 == 1 and w.x == (Fraction(1, 2),)
    assert str(CohomClass.parse("6/4; 2/4 ,0")) == "3/2;1/2,0"
    assert CohomClass.parse("1;").n == 0
    assert format_fraction(Fraction(6, 4)) == "3/2"
    assert format_fraction(Fraction(-4, 2)) == "-2"


def test_malformed_text():
    for text in ("1;;2", "1;a", "", "1;2,,3"):
        try:
            CohomClass.parse(text)
        except InvalidInputError:
            continue
        raise AssertionError(f"accepted {text!r}")

    try:
        HomologyClass.parse("1;1/2")
    except InvalidInputError:
        pass
    else:
        raise AssertionError("fractional homology coefficient accepted")

    try:
        to_fraction(True)
    except InvalidInputError:
        pass
    else:
        raise AssertionError("bool accepted as rational")


def test_blowup_and_scale():
    w = CohomClass.of(7, 3, 2, 1, 1)
    assert w.blowup("1/8") == CohomClass.of(7, 3, 2, 1, 1, "1/8")
    assert w.scale(2) == CohomClass.of(14, 6, 4, 2, 2)
    assert CohomClass.of(2, 1).normalized() == CohomClass.of(1, "1/2")


def test_smallest_degree():
    assert [smallest_degree(k) for k in range(1, 7)] == [1, 1, 2, 2, 2, 3]
    for k in range(1, 60):
        d = smallest_degree(k)
        assert d * (d + 1) <= 2 * k <= d * (d + 3)


if __name__ == "__main__":
    tests = [value for name, value in list(globals().items()) if name.startswith("test_")]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print(f"\n{len(tests) - failed}/{len(tests)} tests passed")
    sys.exit(1 if failed else 0)
