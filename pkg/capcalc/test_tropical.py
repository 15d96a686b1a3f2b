# capcalc/test_tropical.py
import sys
import os
import random
import time
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from capcalc.core.config import Settings
from capcalc.core.exceptions import DegreeMismatchError, OutsideDomainError, UncertifiedError, UnsupportedError
from capcalc.schemas.classes import CohomClass, HomologyClass
from capcalc.services import cremona
from capcalc.services.capacity import capacity_fk
from capcalc.services.corpus import KNOWN_TERMS_N1
from capcalc.services.lattice import area, index
from capcalc.services.tropical import (
    TropicalService,
    certificate,
    certify_bound,
    eval as tropical_eval,
    minimizer_set,
    non_c1nef_class,
    non_c1nef_point,
    separating_epsilon,
    tropical_service,
)


def _random_c1nef(rng: random.Random, n: int) -> CohomClass:
    x = sorted((Fraction(rng.randint(1, 30), 100) for _ in range(n)), reverse=True)
    return CohomClass(x0=1, x=tuple(x))


def test_known_minimizer_sets():
    for k, expected in KNOWN_TERMS_N1.items():
        tp = minimizer_set(1, k)
        assert tp.certified
        assert {(term.a, term.b[0]) for term in tp.terms} == expected, k


def test_known_minimizer_sets_runtime():
    service = TropicalService(Settings())
    start = time.perf_counter()
    sets = {k: service.minimizer_set(1, k) for k in range(1, 9)}
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, elapsed
    assert all(tp.certified for tp in sets.values())


def test_pretty_notation():
    assert minimizer_set(1, 5).pretty() == "(5⊙x⁻⁵)⊕(3⊙x⁻²)⊕2"
    assert minimizer_set(1, 2).pretty() == "(2⊙x⁻²)⊕1"
    assert minimizer_set(0, 6).pretty() == "3"


def test_ball_case():
    for k in range(1, 12):
        tp = minimizer_set(0, k)
        assert [term.a for term in tp.terms] == [capacity_fk(CohomClass.of(1), k).value]


def test_antichain():
    for n in (1, 2, 3):
        for k in range(1, 5):
            terms = minimizer_set(n, k).terms
            for A in terms:
                for B in terms:
                    if A != B:
                        assert not cremona.dominates(A, B), (n, k, A, B)


def test_pointwise_agreement():
    rng = random.Random(31)
    for n in (1, 2, 3):
        for k in range(1, 9):
            tp = minimizer_set(n, k)
            for _ in range(200):
                w = _random_c1nef(rng, n)
                assert tropical_eval(tp, w) == capacity_fk(w, k).value, (n, k, w)


def test_eval_domain():
    tp = minimizer_set(3, 1)
    try:
        tropical_eval(tp, CohomClass.of(1, "1/2", "1/2", "1/2"))
    except OutsideDomainError:
        pass
    else:
        raise AssertionError("evaluation outside the c1-nef domain accepted")

    try:
        tropical_eval(tp, CohomClass.of(1, "1/2"))
    except DegreeMismatchError:
        pass
    else:
        raise AssertionError("degree mismatch accepted")


def test_breakpoints():
    assert tropical_service.breakpoints(minimizer_set(1, 5)) == [Fraction(1, 2), Fraction(2, 3)]
    assert tropical_service.breakpoints(minimizer_set(1, 1)) == []
    try:
        tropical_service.breakpoints(minimizer_set(2, 1))
    except UnsupportedError:
        pass
    else:
        raise AssertionError("breakpoints accepted for n = 2")


def test_certificate_constants():
    cert = certificate(1, 5)
    assert cert.C == 15 and cert.A == 5 and cert.D == 60
    assert cert.a_max == certify_bound(1, 5) == 60
    assert cert.practical

    assert certificate(0, 6).a_max == 3

    large = certificate(10, 1)
    assert large.eps == Fraction(1, 7)
    assert large.A == 18
    assert not large.practical


def test_budget_fallback():
    strict = TropicalService(Settings(TROPICAL_WORK_LIMIT=1))
    cert = strict.certificate(2, 2)
    assert not cert.practical
    try:
        strict.minimizer_set(2, 2)
    except UncertifiedError:
        pass
    else:
        raise AssertionError("uncertified run without budget accepted")

    budgeted = strict.minimizer_set(2, 2, budget=cert.a_max)
    assert not budgeted.certified
    assert set(budgeted.terms) == set(minimizer_set(2, 2).terms)


def test_budget_stabilises():
    service = TropicalService(Settings(TROPICAL_WORK_LIMIT=1))
    sets = [set(service.minimizer_set(1, 4, budget=b).terms) for b in (8, 16, 48)]
    assert sets[0] == sets[1] == sets[2]
    assert {(A.a, A.b[0]) for A in sets[0]} == KNOWN_TERMS_N1[4]


def test_large_n_uncertified():
    tp = minimizer_set(10, 1, budget=5)
    assert not tp.certified
    assert tp.a_max == 5
    assert tp.terms
    for A in tp.terms:
        assert index(A) >= 2


def test_non_c1nef_family():
    for a in range(1, 7):
        assert index(non_c1nef_class(a)) == 2
    for a in range(1, 6):
        eps = separating_epsilon(a)
        w = non_c1nef_point(a, eps)
        assert cremona.is_reduced(w)
        assert not cremona.is_c1nef(w)
        challenger = area(w, non_c1nef_class(a + 1))
        assert all(challenger < area(w, non_c1nef_class(j)) for j in range(1, a + 1))


def test_service_cache():
    service = TropicalService(Settings())
    first = service.minimizer_set(1, 3)
    assert service.minimizer_set(1, 3) is first
    assert HomologyClass.of(2, 1) in first.terms


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
