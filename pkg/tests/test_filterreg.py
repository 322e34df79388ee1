import pytest

from filtergrade import filterreg, fixtures
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import INFINITY, RingDescriptor

R2 = RingDescriptor(("x", "y"), grading="fine")
R3 = RingDescriptor(("x", "y", "z"), grading="fine")
R2_STD = RingDescriptor(("x", "y"))


def polys(ring, *texts):
    return [ring.parse(t) for t in texts]


def cyclic(ring, *gens):
    return ModulePresentation.cyclic(ring, polys(ring, *gens))


@pytest.mark.parametrize(
    "module, a, x, expected",
    [
        (cyclic(R2, "x*y"), ["x"], "x", True),
        (cyclic(R2, "x*y"), ["x"], "y", False),
        (cyclic(R2, "x^2", "x*y"), ["x", "y^2"], "x", False),
        (cyclic(R2, "x^2", "x*y"), ["x"], "y", True),
    ],
)
def test_filter_regular_element(module, a, x, expected):
    ring = module.ring
    assert filterreg.is_fr_element(polys(ring, *a), ring.parse(x), module) == expected


def test_filter_regular_element_must_be_nonzero():
    with pytest.raises(ValueError):
        filterreg.is_fr_element(polys(R2, "x"), R2.zero(), cyclic(R2, "x*y"))


@pytest.mark.parametrize(
    "ring, a, xs, module, expected_steps",
    [
        (R3, ["y", "z"], ["y", "z"], cyclic(R3, "x*y", "x*z"), [True, True]),
        (R2, ["1"], ["x", "y"], cyclic(R2), [True, True]),
        (R2, ["1"], ["x", "x"], cyclic(R2), [True, False]),
        (R2, ["x"], [], cyclic(R2), []),
        (R2, ["x"], ["y"], cyclic(R2, "x*y"), [False]),
    ],
)
def test_filter_regular_sequence(ring, a, xs, module, expected_steps):
    report = filterreg.is_fr_sequence(polys(ring, *a), polys(ring, *xs), module)
    assert report.verdict_per_step == expected_steps
    assert report.verdict == all(expected_steps)
    assert len(report.witnesses) == len(xs)


def test_step_witness_carries_annihilator():
    report = filterreg.is_fr_sequence(polys(R2, "x"), polys(R2, "x"), cyclic(R2, "x*y"))
    (witness,) = report.witnesses
    assert [str(g) for g in witness.annihilator] == ["x"]


@pytest.mark.parametrize(
    "ring, a, xs, module, consistent, regular",
    [
        (R3, ["y", "z"], ["y", "z"], cyclic(R3, "x*y", "x*z"), True, True),
        (R2, ["1"], ["x"], cyclic(R2), True, True),
        (R2, ["x"], ["y"], cyclic(R2, "x*y"), True, False),
    ],
)
def test_equivalence_audit(ring, a, xs, module, consistent, regular):
    audit = filterreg.equivalence_audit(polys(ring, *a), polys(ring, *xs), module, powers=((2, 3),))
    assert audit.consistent == consistent
    assert all(audit.support_condition) == regular
    assert audit.support_condition == audit.saturation_condition
    if regular:
        assert all(audit.powered.values())


def test_equivalence_audit_rejects_nonpositive_powers():
    with pytest.raises(ValueError):
        filterreg.equivalence_audit(polys(R2, "x"), polys(R2, "y"), cyclic(R2), powers=((0,),))


def test_find_sequence_stops_with_certificate():
    search = filterreg.find_fr_sequence(polys(R2, "x"), polys(R2, "y"), cyclic(R2), 2)
    assert search.sequence == polys(R2, "y")
    assert search.certificate == 1
    assert not search.complete
    assert search.certified


def test_find_sequence_fails_at_first_step():
    search = filterreg.find_fr_sequence(polys(R2, "x"), polys(R2, "y"), cyclic(R2, "x*y"), 1)
    assert search.sequence == []
    assert search.certificate == 0


@pytest.mark.parametrize("target", [1, 2, 3])
def test_find_sequence_in_infinite_case(target):
    search = filterreg.find_fr_sequence(polys(R2, "x"), polys(R2, "x", "y"), cyclic(R2), target)
    assert search.complete
    assert len(search.sequence) == target
    assert filterreg.is_fr_sequence(polys(R2, "x"), search.sequence, cyclic(R2)).verdict


def test_find_sequence_with_no_candidates_is_exhausted():
    search = filterreg.find_fr_sequence(polys(R2, "x"), polys(R2, "y"), cyclic(R2), 2, max_candidates=0)
    assert search.exhausted
    assert search.sequence == []
    assert not search.certified


def test_unknown_search_order():
    with pytest.raises(ValueError):
        list(filterreg.candidate_elements(polys(R2_STD, "x"), R2_STD, "sideways"))


def test_candidates_start_with_monomials():
    candidates = list(filterreg.candidate_elements(polys(R2_STD, "x", "y"), R2_STD))
    assert candidates[:2] == polys(R2_STD, "x", "y")
    assert R2_STD.parse("x + y") in candidates
    assert len(candidates) == len(set(candidates))


@pytest.mark.parametrize(
    "a, b, module, lc, expected",
    [
        (["x"], ["y"], cyclic(R2), True, 1),
        (["x"], ["y"], cyclic(R2, "x*y"), True, 0),
        (["1"], ["x", "y"], cyclic(R2), False, 2),
        (["x"], ["x", "y"], cyclic(R2), True, INFINITY),
    ],
)
def test_fgrade(a, b, module, lc, expected):
    result = filterreg.fgrade(polys(R2, *a), polys(R2, *b), module, with_lc_check=lc)
    assert result.value == expected
    assert result.ext_certificate == expected
    assert result.constructive_value == expected
    if lc:
        assert result.lc_certificate == expected
    assert result.consistent


@pytest.mark.parametrize(
    "module, expected",
    [
        (cyclic(R2_STD), 0),
        (cyclic(R2_STD, "x"), INFINITY),
    ],
)
def test_fgrade_on_zero_ideal(module, expected):
    result = filterreg.fgrade(polys(R2_STD, "x"), [R2_STD.zero()], module)
    assert result.ext_certificate == expected
    assert result.constructive_value == expected
    assert not result.notes
    assert result.consistent


@pytest.mark.parametrize("order", filterreg.SEARCH_ORDERS)
def test_fgrade_is_independent_of_search_order(order):
    result = filterreg.fgrade(polys(R3, "y", "z"), polys(R3, "y", "z"), cyclic(R3, "x*y", "x*z"), order=order)
    assert result.constructive_value == result.ext_certificate


def test_fgrade_over_standard_grading_skips_local_cohomology():
    result = filterreg.fgrade(polys(R2_STD, "x"), polys(R2_STD, "y"), cyclic(R2_STD), with_lc_check=True)
    assert result.value == 1
    assert result.lc_certificate is None
    assert "local cohomology certificate skipped" in result.notes


@pytest.mark.parametrize(
    "b, module, expected",
    [
        (["x"], cyclic(R2), 1),
        (["x", "y"], cyclic(R2), INFINITY),
        (["y"], cyclic(R2, "x"), INFINITY),
    ],
)
def test_fdepth(b, module, expected):
    assert filterreg.fdepth(polys(R2, *b), module).value == expected


def test_fgrade_by_module():
    result = filterreg.fgrade_by_module(polys(R2, "x"), cyclic(R2, "y"), cyclic(R2))
    assert result.agree
    assert result.ext_value == 1


@pytest.mark.parametrize(
    "xs, module, expected",
    [
        (["x", "y"], cyclic(R2), True),
        (["x", "x"], cyclic(R2), False),
        (["y"], cyclic(R2, "x*y"), False),
    ],
)
def test_weak_sequence(xs, module, expected):
    assert filterreg.is_weak_sequence(polys(R2, *xs), module) == expected
    unit_report = filterreg.is_fr_sequence([R2.one()], polys(R2, *xs), module)
    assert unit_report.verdict == expected


@pytest.mark.parametrize("seed", range(5))
def test_seeded_triple_check(seed):
    checked = 0
    for fixture in fixtures.random_fixtures(seed, 10, max_vars=3):
        check = fixtures.check_fixture(fixture, max_candidates=2_000)
        assert check.agree, str(fixture)
        assert set(check.constructive) == set(filterreg.SEARCH_ORDERS)
        assert (check.lc_value is not None) == (fixture.ring.nvars <= fixtures.LC_MAX_VARS)
        checked += 1
    assert checked == 10


def test_random_fixtures_are_reproducible():
    first = [str(f) for f in fixtures.random_fixtures(7, 5)]
    second = [str(f) for f in fixtures.random_fixtures(7, 5)]
    assert first == second


def test_random_partition_sums():
    import random
    rng = random.Random(3)
    for _ in range(20):
        parts = fixtures.random_partition(rng, 4, 3)
        assert len(parts) == 3
        assert sum(parts) == 4
        assert min(parts) >= 0
