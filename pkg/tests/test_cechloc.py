import pytest

from filtergrade import cechloc, fpmod
from filtergrade.errors import NotAdmissibleError
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import INFINITY, DegreeWindow, RingDescriptor

R2 = RingDescriptor(("x", "y"), grading="fine")
R3 = RingDescriptor(("x", "y", "z"), grading="fine")
R4 = RingDescriptor(("x", "y", "z", "w"), grading="fine")


def polys(ring, *texts):
    return [ring.parse(t) for t in texts]


def cyclic(ring, *gens):
    return ModulePresentation.cyclic(ring, polys(ring, *gens))


def window(ring, lo, hi):
    return DegreeWindow.uniform(lo, hi, ring.nvars)


def test_cech_table_along_principal_ideal():
    table = cechloc.cech_table(polys(R2, "x"), cyclic(R2), window(R2, -2, 2))
    for a, b in window(R2, -2, 2):
        assert table.dim(1, (a, b)) == (1 if a <= -1 and b >= 0 else 0)
    assert table.row(0) == {}
    assert table.max_index() == 1


def test_cech_table_along_irrelevant_ideal():
    table = cechloc.cech_table(polys(R2, "x", "y"), cyclic(R2), window(R2, -2, 1))
    for a, b in window(R2, -2, 1):
        assert table.dim(2, (a, b)) == (1 if a <= -1 and b <= -1 else 0)
    assert table.indices() == [2]


def test_h0_row_matches_torsion():
    ideal = polys(R3, "y", "z")
    module = cyclic(R3, "x*y", "x*z")
    table = cechloc.cech_table(ideal, module, window(R3, -1, 2))
    assert table.row(0)
    assert cechloc.h0_consistent(ideal, module, table)


def test_wider_margin_leaves_entries_unchanged():
    ideal = polys(R2, "x", "y")
    module = cyclic(R2, "x^2*y")
    narrow = cechloc.cech_table(ideal, module, window(R2, -2, 2))
    wide = cechloc.cech_table(ideal, module, window(R2, -2, 2), margin_extra=2)
    assert narrow.entries == wide.entries

    narrow = cechloc.gen_cech_table(ideal, cyclic(R2, "x"), cyclic(R2), window(R2, -2, 1))
    wide = cechloc.gen_cech_table(ideal, cyclic(R2, "x"), cyclic(R2), window(R2, -2, 1), margin_extra=1)
    assert narrow.entries == wide.entries


def test_generalized_table_with_free_first_module():
    ideal = polys(R2, "x")
    w = window(R2, -2, 2)
    plain = cechloc.cech_table(ideal, cyclic(R2, "x*y"), w)
    generalized = cechloc.gen_cech_table(ideal, cyclic(R2), cyclic(R2, "x*y"), w)
    assert generalized.entries == plain.entries
    assert generalized.label == "H(M,N)"


def test_generalized_table_of_zero_module():
    table = cechloc.gen_cech_table(polys(R2, "x", "y"), cyclic(R2, "x"), cyclic(R2, "1"), window(R2, -2, 2))
    assert table.entries == {}


def test_generalized_table_stays_below_top():
    # pd R/(x) = 1, dim R = 2
    table = cechloc.gen_cech_table(polys(R2, "x", "y"), cyclic(R2, "x"), cyclic(R2), window(R2, -3, 1))
    assert table.row(3) == {}
    assert table.row(2)
    assert table.max_index() == 2


@pytest.mark.parametrize(
    "ideal, module, expected",
    [
        (["x", "y"], cyclic(R2), 2),
        (["x"], cyclic(R2), 1),
        (["x", "y"], cyclic(R2, "x", "y"), 0),
        (["x", "y"], cyclic(R2, "1"), -1),
    ],
)
def test_cohomological_dimension(ideal, module, expected):
    assert cechloc.cohomological_dimension(polys(R2, *ideal), cyclic(R2), module) == expected


@pytest.mark.parametrize(
    "a, b, module, expected",
    [
        (["x"], ["y"], cyclic(R2), 1),
        (["x"], ["y"], cyclic(R2, "x*y"), 0),
        (["x"], ["x", "y"], cyclic(R2), INFINITY),
    ],
)
def test_local_cohomology_support_index(a, b, module, expected):
    assert cechloc.local_cohomology_support_index(polys(R2, *a), polys(R2, *b), module) == expected


def test_torsion_along_ideal_and_sequence():
    report = cechloc.ns_verify(polys(R3, "y", "z"), polys(R3, "y"), cyclic(R3), cyclic(R3, "x*y", "x*z"), window(R3, -2, 2))
    assert report.verdict
    assert report.checks["H0 exact"]
    assert report.checks["H0 table"]
    assert report.details["window"] == "[-2..2]"
    assert len(report.tables) == 2


def test_torsion_along_two_step_sequence():
    report = cechloc.ns_verify(
        polys(R4, "y", "z", "w"),
        polys(R4, "y", "z"),
        cyclic(R4),
        cyclic(R4, "x*y", "x*z", "x*w"),
        window(R4, -3, 3),
    )
    assert report.verdict, report.checks
    assert set(report.checks) == {"H0 exact", "H0 table", "H1 table"}


def test_empty_sequence_is_vacuous():
    report = cechloc.ns_verify(polys(R2, "x"), [], cyclic(R2), cyclic(R2), window(R2, 0, 1))
    assert report.verdict
    assert report.tables == []


@pytest.mark.parametrize(
    "a, xs, module, failure",
    [
        (["x", "y"], ["y"], cyclic(R2, "x*y"), "not filter regular"),
        (["x"], ["y"], cyclic(R2), "not in the ideal"),
    ],
)
def test_verification_preconditions(a, xs, module, failure):
    report = cechloc.ns_verify(polys(R2, *a), polys(R2, *xs), cyclic(R2), module, window(R2, 0, 1))
    assert not report.verdict
    assert failure in report.failure


def test_composite_over_free_module():
    report = cechloc.ns_compose_verify(
        polys(R2, "x", "y"), polys(R2, "x"), cyclic(R2), cyclic(R2), window(R2, -2, 1), indices=[0, 1],
    )
    assert report.verdict, report.checks
    assert set(report.checks) == {"H1 vs H0", "H2 vs H1"}
    direct, composite = report.tables
    assert composite.label == "H(M,W)"


def test_composite_at_projective_dimension():
    report = cechloc.ns_compose_verify(
        polys(R2, "x", "y"), polys(R2, "x"), cyclic(R2, "x"), cyclic(R2), window(R2, -2, 1), indices=[1],
    )
    assert report.details["pd"] == "1"
    assert set(report.checks) == {"H2 vs H1"}
    assert report.verdict, report.checks


def test_admissible_modules():
    admissible = cechloc.AdmissibleModule.from_presentation(cyclic(R2, "x^2", "x*y"))
    assert str(admissible) == "cyclic (x*y, x^2)"
    assert not admissible.is_zero()
    assert cechloc.AdmissibleModule.from_presentation(cyclic(R2, "1")).is_zero()


@pytest.mark.parametrize(
    "module",
    [
        ModulePresentation.from_rows(R2, [[R2.parse("x")], [R2.parse("y")]], [(0, 1), (1, 0)]),
        ModulePresentation.cyclic(RingDescriptor(("x", "y")), [RingDescriptor(("x", "y")).parse("x")]),
    ],
)
def test_inadmissible_modules(module):
    with pytest.raises(NotAdmissibleError):
        cechloc.AdmissibleModule.from_presentation(module)


def test_table_exports():
    table = cechloc.cech_table(polys(R2, "x"), cyclic(R2), DegreeWindow((-1, 0), (-1, 1)))
    assert table.as_tsv().splitlines() == ["i\td1\td2\tdim", "1\t-1\t0\t1", "1\t-1\t1\t1"]
    metadata = table.metadata()
    assert metadata["ideal"] == ["x"]
    assert metadata["window"] == "[-1..-1, 0..1]"


def test_empty_table_exports_header():
    table = cechloc.cech_table(polys(R2, "x"), cyclic(R2), window(R2, 0, 1))
    assert table.as_tsv() == "i\td1\td2\tdim\n"


def test_cech_table_needs_monomial_ideal():
    with pytest.raises(ValueError):
        cechloc.cech_table([R2.parse("x") + R2.parse("y")], cyclic(R2), window(R2, 0, 1))


def test_exact_h0_over_free_module_is_torsion():
    ideal = polys(R3, "y", "z")
    module = cyclic(R3, "x*y", "x*z")
    h0 = cechloc.h0_exact(ideal, ModulePresentation.free(R3), module)
    torsion, _ = fpmod.gamma(ideal, module)
    box = window(R3, 0, 2)
    assert fpmod.hilbert_function(h0, box) == fpmod.hilbert_function(torsion, box)
    assert not h0.is_zero()
