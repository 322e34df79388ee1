import random

import pytest

from sympy.polys.domains import GF, QQ

from filtergrade import groebner
from filtergrade.fixtures import random_polynomial
from filtergrade.groebner import FreeModuleElement, ideal_basis, ideal_element
from filtergrade.ring_core import RingDescriptor, poly_arith

R2 = RingDescriptor(("x", "y"))
R3 = RingDescriptor(("x", "y", "z"))


def polys(ring, *texts):
    return [ring.parse(t) for t in texts]


def as_set(ring, gens):
    return {str(g) for g in ideal_basis(gens, ring).polynomials()}


@pytest.mark.parametrize(
    "gens, expected",
    [
        (["x^2", "x*y"], {"x^2", "x*y"}),
        (["x"], {"x"}),
        (["x - y", "y"], {"x", "y"}),
        (["x^2 + y", "x*y"], {"x^2 + y", "x*y", "y^2"}),
    ],
)
def test_reduced_basis(gens, expected):
    gb = ideal_basis(polys(R2, *gens), R2)
    assert {str(g) for g in gb.polynomials()} == expected
    assert gb.satisfies_buchberger_criterion()
    assert gb.is_reduced()


def test_basis_over_prime_field():
    ring = RingDescriptor(("x", "y"), GF(2))
    assert as_set(ring, polys(ring, "x + y", "x - y")) == {"x + y"}


def test_normal_form():
    gb = ideal_basis(polys(R2, "x^2", "x*y"), R2)
    f = R2.parse("x^2*y + y")
    assert groebner.normal_form(f, gb) == R2.parse("y")
    assert groebner.normal_form(groebner.normal_form(f, gb), gb) == R2.parse("y")
    member = R2.parse("3*x^3 - x^2*y^4")
    assert not groebner.normal_form(member, gb)


def _combine(columns, syzygy):
    total = None
    for k, column in enumerate(columns):
        term = column * syzygy[k]
        total = term if total is None else total + term
    return total


@pytest.mark.parametrize(
    "gens, count",
    [
        (["x", "y"], 1),
        (["x^2", "x*y"], 1),
        (["x"], 0),
    ],
)
def test_syzygies(gens, count):
    columns = [ideal_element(p) for p in polys(R2, *gens)]
    found = groebner.syzygies(columns)
    assert len(found) == count
    for syzygy in found:
        assert not _combine(columns, syzygy)
        assert all(entry.is_monomial() and entry.total_degree() == 1 for entry in syzygy.entries())


@pytest.mark.parametrize(
    "ring, ideal, x, expected",
    [
        (R2, ["x^2*y"], "x", ["x*y"]),
        (R2, ["x^2", "x*y"], "1", ["x^2", "x*y"]),
        (R3, ["x*y", "x*z"], "y", ["x"]),
    ],
)
def test_ideal_colon(ring, ideal, x, expected):
    colon = groebner.ideal_colon(polys(ring, *ideal), ring.parse(x), ring)
    assert groebner.same_ideal(colon, polys(ring, *expected), ring)


@pytest.mark.parametrize(
    "ring, ideal, by, expected",
    [
        (R2, ["x^2", "x*y"], ["x", "y"], ["x"]),
        (R3, ["x*y", "x*z"], ["y", "z"], ["x"]),
        (R2, ["x^2*y"], ["x", "y"], ["x^2*y"]),
    ],
)
def test_saturation(ring, ideal, by, expected):
    ideal = polys(ring, *ideal)
    saturated = groebner.ideal_saturate(ideal, polys(ring, *by), ring)
    assert groebner.same_ideal(saturated, polys(ring, *expected), ring)
    assert groebner.ideal_contains(saturated, ideal, ring)


def test_colon_by_zero_is_an_error():
    with pytest.raises(ValueError):
        groebner.ideal_colon(polys(R2, "x"), R2.zero(), R2)


@pytest.mark.parametrize(
    "f, ideal, expected",
    [
        ("x", ["x^2"], True),
        ("y", ["x^2"], False),
        ("x + y", ["x^2", "y^3"], True),
        ("x + y", ["x*y"], False),
        ("0", ["x"], True),
    ],
)
def test_radical_membership(f, ideal, expected):
    assert groebner.radical_member(R2.parse(f), polys(R2, *ideal)) == expected


def _power_in_ideal(f, ideal, ring, max_power=12):
    power = f
    for _ in range(max_power):
        if groebner.ideal_contains(ideal, [power], ring):
            return True
        power = poly_arith(power, f, "mul")
    return False


def test_radical_membership_matches_power_search():
    rng = random.Random(31)
    for case in range(40):
        ring = rng.choice([R2, R3])
        f = random_polynomial(rng, ring, 3)
        ideal = [random_polynomial(rng, ring, 3) for _ in range(rng.randint(1, 2))]
        if case % 3 == 0:
            ideal.append(f ** rng.randint(1, 3))
        elif case % 3 == 1:
            ideal = [poly_arith(f ** rng.randint(1, 2), ideal[0], "mul")]
        assert groebner.radical_member(f, ideal) == _power_in_ideal(f, ideal, ring), (f, ideal)


@pytest.mark.parametrize(
    "ideal, expected",
    [
        (["x"], 1),
        ([], 2),
        (["x", "y"], 0),
        (["1"], -1),
    ],
)
def test_dimension(ideal, expected):
    assert groebner.dim_ideal(polys(R2, *ideal), R2) == expected


def test_intersection():
    meet = groebner.ideal_intersect(polys(R2, "x"), polys(R2, "y"), R2)
    assert groebner.same_ideal(meet, polys(R2, "x*y"), R2)


def test_module_basis_position_over_term():
    twists = ((0,), (0,))
    u = FreeModuleElement.from_list(R2, twists, polys(R2, "x", "y"))
    v = FreeModuleElement.from_list(R2, twists, polys(R2, "0", "x"))
    gb = groebner.buchberger([u, v])
    assert gb.rank == 2
    assert gb.satisfies_buchberger_criterion()
    assert gb.contains(u * R2.parse("y") - v * R2.parse("y"))
    assert not gb.contains(FreeModuleElement.basis(R2, twists, 1))


def test_module_saturation():
    twists = ((0,), (0,))
    u = FreeModuleElement.from_list(R2, twists, polys(R2, "x", "0"))
    v = FreeModuleElement.from_list(R2, twists, polys(R2, "0", "x*y"))
    saturated = groebner.saturate([u, v], polys(R2, "x"), ring=R2, twists=twists)
    gb = groebner.buchberger(saturated, ring=R2, twists=twists)

    assert gb.contains(FreeModuleElement.basis(R2, twists, 0))
    assert gb.contains(FreeModuleElement.from_list(R2, twists, polys(R2, "0", "y")))
    assert not gb.contains(FreeModuleElement.basis(R2, twists, 1))

    with pytest.raises(ValueError):
        groebner.saturate([u, v], [], ring=R2, twists=twists)
