import pytest

from filtergrade import filterreg, fixtures, fpmod, groebner, spectra
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import INFINITY, RingDescriptor

R2 = RingDescriptor(("x", "y"), grading="fine")
R3 = RingDescriptor(("x", "y", "z"), grading="fine")


def polys(ring, *texts):
    return [ring.parse(t) for t in texts]


def cyclic(ring, *gens):
    return ModulePresentation.cyclic(ring, polys(ring, *gens))


def prime(ring, *names):
    return spectra.prime_from_text(ring, names)


def texts(primes):
    return [str(p) for p in primes]


EXAMPLE_N = fpmod.direct_sum(cyclic(R2, "x"), cyclic(R2, "y"))


@pytest.mark.parametrize(
    "module, expected",
    [
        (cyclic(R2, "x*y"), ["(x)", "(y)"]),
        (cyclic(R2, "x^2", "x*y"), ["(x)", "(x, y)"]),
        (EXAMPLE_N, ["(x)", "(y)"]),
        (cyclic(R2), ["(0)"]),
        (cyclic(R2, "1"), []),
    ],
)
def test_associated_primes(module, expected):
    assert texts(spectra.ass_monomial(module)) == expected


@pytest.mark.parametrize(
    "ring, ideal, expected",
    [
        (R3, ["x*y", "x*z"], ["(x)", "(y, z)"]),
        (R2, ["x"], ["(x)"]),
        (R2, ["x", "y"], ["(x, y)"]),
        (R2, ["x^3*y^2"], ["(x)", "(y)"]),
    ],
)
def test_minimal_primes(ring, ideal, expected):
    assert texts(spectra.minimal_primes_monomial(polys(ring, *ideal), ring)) == expected


def test_prime_from_ideal():
    assert spectra.prime_from_ideal(polys(R2, "y"), R2) == prime(R2, "y")
    with pytest.raises(ValueError):
        spectra.prime_from_ideal(polys(R2, "x*y"), R2)


@pytest.mark.parametrize(
    "a, m_module, expected",
    [
        (["x"], cyclic(R2), 1),
        (["x", "y"], cyclic(R2), INFINITY),
    ],
)
def test_artinian_index(a, m_module, expected):
    result = spectra.artinian_index(polys(R2, *a), m_module, cyclic(R2))
    assert result.value == expected
    assert result.agree


def test_artinian_index_matches_filter_grade():
    result = spectra.artinian_index(polys(R2, "x"), cyclic(R2, "y"), cyclic(R2))
    grade = filterreg.fgrade(R2.gens(), polys(R2, "x", "y"), cyclic(R2), constructive=False)
    assert result.value == grade.value
    assert result.agree


def test_artinian_index_on_random_fixtures():
    for fixture in fixtures.random_fixtures(11, 20, max_vars=3):
        ring = fixture.ring
        m_module = ModulePresentation.cyclic(ring, fixture.b)
        n_module = fixture.module
        result = spectra.artinian_index(fixture.a, m_module, n_module)

        ann_m = fpmod.annihilator(m_module)
        grade = filterreg.fgrade(ring.gens(), fixture.a + ann_m, n_module, constructive=False)
        assert result.value == grade.value, str(fixture)
        assert result.agree, str(fixture)

        ideal = fixture.a + ann_m + fpmod.annihilator(n_module)
        assert (result.value == INFINITY) == (groebner.dim_ideal(ideal, ring) <= 0), str(fixture)


@pytest.mark.parametrize(
    "a, m_module, expected",
    [
        (["x", "y"], cyclic(R2), True),
        (["x"], cyclic(R2), False),
        (["x"], cyclic(R2, "y"), True),
    ],
)
def test_all_artinian(a, m_module, expected):
    result = spectra.all_artinian(polys(R2, *a), m_module, cyclic(R2))
    assert result.by_dimension == expected
    assert result.agree


@pytest.mark.parametrize(
    "m_module, n_module, expected",
    [
        (cyclic(R2, "x", "y"), cyclic(R2), True),
        (cyclic(R2, "x"), cyclic(R2), False),
        (cyclic(R2, "x"), cyclic(R2, "y"), True),
    ],
)
def test_all_ext_finite_length(m_module, n_module, expected):
    result = spectra.all_ext_finite_length(m_module, n_module)
    assert result.by_dimension == expected
    assert result.agree


@pytest.mark.parametrize(
    "a, m_module, n_module",
    [
        (["x"], cyclic(R2), cyclic(R2)),
        (["x"], cyclic(R2, "y"), cyclic(R2)),
        (["x", "y"], cyclic(R2), cyclic(R2, "x*y")),
    ],
)
def test_localized_index(a, m_module, n_module):
    audit = spectra.localized_index_audit(polys(R2, *a), m_module, n_module)
    assert audit.agree
    assert prime(R2, "x", "y") in audit.primes


@pytest.mark.parametrize(
    "a, m_module, p, n, expected",
    [
        (["x", "y"], cyclic(R2, "x"), ("x",), 1, True),
        (["x", "y"], cyclic(R2, "x"), ("y",), 1, False),
        (["x"], cyclic(R2), ("y",), 1, True),
        (["x"], cyclic(R2), ("x",), 1, False),
    ],
)
def test_cd_test(a, m_module, p, n, expected):
    assert spectra.cd_test(polys(R2, *a), m_module, prime(R2, *p), n) == expected


@pytest.mark.parametrize(
    "a, expected",
    [
        (["x", "y"], ["(x)", "(y)"]),
        (["x"], ["(y)"]),
    ],
)
def test_top_local_attached_primes(a, expected):
    report = spectra.att_top_local(polys(R2, *a), EXAMPLE_N)
    assert texts(report.att) == expected
    assert report.top_index == 1
    assert report.verdict


def test_top_generalized_attached_primes_strictly_smaller():
    m = polys(R2, "x", "y")
    report = spectra.att_top_gen(m, cyclic(R2, "x"), EXAMPLE_N)
    assert texts(report.att) == ["(x)"]
    assert texts(report.other_route) == ["(x)"]
    assert report.top_index == 2
    assert report.verdict
    local = spectra.att_top_local(m, EXAMPLE_N)
    assert set(report.att) < set(local.att)


CECH_CHECKS = ["Čech cd(M, R/p) = n + d matches witnesses", "Čech cd(M, N) = n + d iff Att is nonempty"]


@pytest.mark.parametrize(
    "a, m_module, expected",
    [
        (["x", "y"], cyclic(R2, "x"), ["(x)"]),
        (["x", "y"], cyclic(R2, "y"), ["(y)"]),
        (["x"], cyclic(R2, "x"), []),
        (["y"], cyclic(R2), ["(x)"]),
    ],
)
def test_top_generalized_checked_against_cech(a, m_module, expected):
    report = spectra.att_top_gen(polys(R2, *a), m_module, EXAMPLE_N)
    assert texts(report.att) == expected
    assert all(report.checks[name] for name in CECH_CHECKS), report.checks
    assert report.verdict


def test_top_generalized_with_free_module_is_local():
    m = polys(R2, "x", "y")
    report = spectra.att_top_gen(m, cyclic(R2), EXAMPLE_N)
    assert report.att == spectra.att_top_local(m, EXAMPLE_N).att


def test_top_attached_primes_empty_below_dimension():
    report = spectra.att_top_gen(polys(R2, "x"), cyclic(R2), cyclic(R2))
    assert report.att == []
    assert report.other_route == []
    assert report.verdict


def test_cd_properties():
    modules = {
        "R/(x^2)": cyclic(R2, "x^2"),
        "R/(x)": cyclic(R2, "x"),
        "R/(y)": cyclic(R2, "y"),
        "R": cyclic(R2),
    }
    audit = spectra.cd_properties_audit(
        polys(R2, "x", "y"),
        cyclic(R2),
        modules,
        split_pairs=[("R/(x)", "R/(y)")],
        monotone_pairs=[("R/(x^2)", "R/(x)"), ("R/(x)", "R/(x^2)"), ("R/(x)", "R")],
    )
    assert audit.values["R/(x^2)"] == audit.values["R/(x)"] == 1
    assert audit.values["R"] == 2
    assert audit.verdict, audit.checks
    assert len(audit.checks) == 4


def test_cd_max_rule_on_cyclic_sequence():
    audit = spectra.cd_properties_audit(
        polys(R3, "y", "z"),
        cyclic(R3),
        {},
        cyclic_pairs=[(polys(R3, "x*y", "x*z"), polys(R3, "x"))],
    )
    assert audit.verdict, audit.checks
    assert audit.values["R/(x*y, x*z)"] == 2


@pytest.mark.parametrize(
    "module",
    [
        cyclic(R2, "x^2", "y"),
        cyclic(R2, "x", "y"),
        cyclic(R2, "x"),
        cyclic(R2, "1"),
    ],
)
def test_finite_length_check(module):
    assert spectra.finite_length_check(module)


def test_cd_cyclic_pair_needs_principal_ideal():
    with pytest.raises(ValueError, match="principal"):
        spectra.cd_properties_audit(
            polys(R3, "y", "z"),
            cyclic(R3),
            {},
            cyclic_pairs=[(polys(R3, "x*y", "x*z"), polys(R3, "x", "y"))],
        )
