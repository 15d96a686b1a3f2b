# capcalc/test_capacity.py
import sys
import os
import random
import time
from fractions import Fraction
from math import isqrt
from typing import Iterator, Optional, Tuple

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from capcalc.core.config import Settings
from capcalc.core.exceptions import InvalidInputError, OutsideConeError, UnsupportedError
from capcalc.schemas.classes import CohomClass, HomologyClass
from capcalc.services import cremona
from capcalc.services.capacity import (
    CapacityService,
    capacity_fk,
    enumerate_exceptional,
    in_U2,
    in_U5,
    minimum_area,
)
from capcalc.services.lattice import area, index, index_formula, self_intersection, smallest_degree
from capcalc.services.toric import ball_capacity


def _coefficient_vectors(n: int, budget: int, signed: bool, top: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    # every b with sum(b_i^2 + b_i) <= budget; nonincreasing and >= 0 unless signed
    if n == 0:
        yield ()
        return
    root = isqrt(budget)
    if signed:
        candidates = range(-(root + 1), root + 1)
    else:
        candidates = range(root if top is None else min(top, root), -1, -1)
    for b in candidates:
        cost = b * b + b
        if cost > budget:
            continue
        for rest in _coefficient_vectors(n - 1, budget - cost, signed, b):
            yield (b,) + rest


def brute_force_fk(w: CohomClass, k: int, signed: bool = True) -> Fraction:
    """Minimum area over every class with a >= 1 and index >= 2k.

    Stops at the first level a with a*x0 - (a + 3/2)|x| above the best value, a lower
    bound for the area of every class of that level and beyond (n <= 4, x >= 0).
    With signed=False only b_1 >= ... >= b_n >= 0 is visited, enough for sorted x.
    """
    norm = sum((x * x for x in w.x), Fraction(0))
    best = None
    a = 0
    while True:
        a += 1
        if best is not None:
            gap = a * w.x0 - best
            if gap > 0 and gap * gap > (a + Fraction(3, 2)) ** 2 * norm:
                return best
        budget = index_formula(a, ()) - 2 * k
        if budget < 0:
            continue
        for b in _coefficient_vectors(w.n, budget, signed):
            value = a * w.x0 - sum((c * x for c, x in zip(b, w.x)), Fraction(0))
            if best is None or value < best:
                best = value


def _small_omega(rng: random.Random, n: int) -> CohomClass:
    # each x_i <= 1/4, so sum x_i^2 <= x0^2 / 4 for n <= 4, coordinates unsorted
    return CohomClass(x0=1, x=tuple(Fraction(rng.randint(1, 25), 100) for _ in range(n)))


def _reduced_omega(rng: random.Random, n: int, near_boundary: bool) -> CohomClass:
    # near_boundary puts x_1 + x_2 + x_3 (x_1 + x_2, x_1 for smaller n) in [9/10, 1)
    while True:
        top = 99 if n == 1 else 60
        x = sorted((Fraction(rng.randint(1, top), 100) for _ in range(n)), reverse=True)
        head = sum(x[:3], Fraction(0))
        if near_boundary and not Fraction(9, 10) <= head < 1:
            continue
        if sum(xi * xi for xi in x) > Fraction(1, 2) and n > 1:
            continue
        w = CohomClass(x0=1, x=tuple(x))
        if cremona.is_reduced(w):
            return w


def test_ball_formula():
    ball = CohomClass.of(1)
    for k in range(1, 51):
        assert capacity_fk(ball, k).value == ball_capacity(1, k) == smallest_degree(k)


def test_ball_formula_runtime():
    ball = CohomClass.of(1)
    start = time.perf_counter()
    for k in range(1, 51):
        assert capacity_fk(ball, k).value == ball_capacity(1, k)
    assert time.perf_counter() - start < 1.0


def test_first_capacities_at_half():
    w = CohomClass.of(1, "1/2")
    values = [capacity_fk(w, k).value for k in range(1, 9)]
    expected = [Fraction(v, 2) for v in (1, 2, 3, 3, 4, 4, 5, 5)]
    assert values == expected


def test_witnesses():
    result = capacity_fk(CohomClass.of(7, 3, 2, 1, 1), 1)
    assert result.value == 4
    assert HomologyClass.of(1, 1, 0, 0, 0) in result.witnesses
    for A in result.witnesses:
        assert in_U5(A, 1)
        assert area(result.omega_reduced, A) == result.value

    payload = result.to_payload()
    assert payload["value"] == "4"
    assert payload["reduced_omega"] == "7;3,2,1,1"


def test_oracle_agreement():
    rng = random.Random(2024)
    for trial in range(12):
        n = 1 + trial % 3
        w = _small_omega(rng, n)
        for k in range(1, 7):
            assert capacity_fk(w, k).value == brute_force_fk(w, k), (w, k)


def test_oracle_agreement_reduced():
    rng = random.Random(4242)
    for trial in range(100):
        n = 1 + trial % 4
        w = _reduced_omega(rng, n, near_boundary=trial % 8 >= 4)
        for k in range(1, 11):
            assert capacity_fk(w, k).value == brute_force_fk(w, k, signed=False), (w, k)


def test_oracle_near_boundary():
    for w in (CohomClass.of(1, "1/3", "1/3", "1/3"), CohomClass.of(1, "1/2", "1/4", "1/4", "1/5"),
              CohomClass.of(1, "9/20", "9/20"), CohomClass.of(1, "2/5", "3/10", "1/5", "1/10")):
        assert cremona.is_reduced(w)
        for k in range(1, 11):
            assert capacity_fk(w, k).value == brute_force_fk(w, k, signed=False), (w, k)


def test_in_U2_rejects_non_positive_k():
    for k in (0, -3):
        assert in_U2(HomologyClass.of(1, 1), k) is False
        assert in_U2(HomologyClass.of(3, 1, 1, 1), k) is False
    assert in_U2(HomologyClass.of(1, 0), 1)


def test_cremona_invariance():
    for k in range(1, 7):
        assert capacity_fk(CohomClass.of(8, 5, 3, 3), k).value == capacity_fk(CohomClass.of(5, 2, 0, 0), k).value
        assert capacity_fk(CohomClass.of(7, 3, 1, 2, 1), k).value == capacity_fk(CohomClass.of(7, 3, 2, 1, 1), k).value


def test_monotone_in_k_and_scaling():
    rng = random.Random(8)
    for _ in range(10):
        w = _small_omega(rng, rng.randint(1, 4))
        values = [capacity_fk(w, k).value for k in range(1, 8)]
        assert values == sorted(values)
        for k in (1, 3, 5):
            assert capacity_fk(w.scale(3), k).value == 3 * values[k - 1]
            assert capacity_fk(w.scale("1/2"), k).value == values[k - 1] / 2


def test_exceptional_counts():
    counts = [len(enumerate_exceptional(n)) for n in range(0, 9)]
    assert counts == [0, 1, 3, 6, 10, 16, 27, 56, 240]
    for E in enumerate_exceptional(5):
        assert self_intersection(E) == -1
        assert index(E) == 0
    assert HomologyClass.exceptional(1, 2) in enumerate_exceptional(2)
    assert HomologyClass.of(1, 1, 1) in enumerate_exceptional(2)


def test_exceptional_unsupported():
    try:
        enumerate_exceptional(9)
    except UnsupportedError as e:
        assert "infinite" in e.message
    else:
        raise AssertionError("n = 9 accepted")


def test_nef_witness():
    rng = random.Random(99)
    for trial in range(50):
        n = 1 + trial % 8
        x = sorted((Fraction(rng.randint(1, 30), 100) for _ in range(n)), reverse=True)
        w = CohomClass(x0=1, x=tuple(x))
        assert cremona.in_c1nef_domain(w)
        for k in range(1, 7):
            result = capacity_fk(w, k)
            assert any(in_U2(A, k) for A in result.witnesses), (w, k)


def test_blowup_limit():
    service = CapacityService(Settings())
    base = CohomClass.of(7, 3, 2, 1, 1)
    for k in range(1, 7):
        target = service.capacity_fk(base, k).value
        terms = service.blowup_sequence(base, k, m_max=12)
        values = [term.value for term in terms]
        assert values == sorted(values)
        for term in terms:
            assert term.value <= target
            assert target - term.value <= 11 * term.eps


def test_errors():
    for k in (0, -1):
        try:
            capacity_fk(CohomClass.of(1, "1/2"), k)
        except InvalidInputError:
            continue
        raise AssertionError(f"k={k} accepted")

    for w in (CohomClass.of(0, 1), CohomClass.of(1, 1), CohomClass.of(1, 2)):
        try:
            capacity_fk(w, 1)
        except OutsideConeError:
            continue
        raise AssertionError(f"{w} accepted")


def test_minimum_area_core():
    value, witnesses = minimum_area(2, (1, 1), 1, reduced_only=False)
    assert value == 1
    assert (1, (1, 0)) in witnesses
    value, _ = minimum_area(1, (), 6)
    assert value == 3


def test_parallel_matches_sequential():
    sequential = CapacityService(Settings(CAPCALC_THREADS=1))
    parallel = CapacityService(Settings(CAPCALC_THREADS=4))
    for w in (CohomClass.of(7, 3, 2, 1, 1), CohomClass.of(1, "1/2"), CohomClass.of(5, 2, 0, 0)):
        for k in (1, 4, 9):
            left, right = sequential.capacity_fk(w, k), parallel.capacity_fk(w, k)
            assert left.value == right.value
            assert left.witnesses == right.witnesses


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
