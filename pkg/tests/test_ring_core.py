import random

import pytest

from sympy.polys.domains import GF, QQ

from filtergrade.fixtures import random_polynomial
from filtergrade.errors import RingMismatchError, WindowSizeError
from filtergrade.ring_core import (
    INHOMOGENEOUS,
    DegreeWindow,
    RingDescriptor,
    degree_of,
    homogeneity_check,
    is_monomial_ideal,
    make_field,
    poly_arith,
)

R = RingDescriptor(("x", "y"), QQ, "standard")
R_FINE = RingDescriptor(("x", "y"), QQ, "fine")
R_F2 = RingDescriptor(("x", "y"), GF(2), "standard")


@pytest.mark.parametrize(
    "ring, f, g, op, expected",
    [
        (R, "x + y", "x - y", "mul", "x^2 - y^2"),
        (R, "3*x^2*y - 1/2*y^3", "0", "add", "3*x^2*y - 1/2*y^3"),
        (R_F2, "x + y", "x + y", "mul", "x^2 + y^2"),
    ],
)
def test_poly_arith(ring, f, g, op, expected):
    result = poly_arith(ring.parse(f), ring.parse(g), op)
    assert result == ring.parse(expected)


def test_ring_axioms_on_random_triples():
    rng = random.Random(1729)
    rings = [R, R_FINE, R_F2, RingDescriptor(("x", "y", "z"), GF(7), "standard")]
    for _ in range(1000):
        ring = rng.choice(rings)
        f, g, h = (random_polynomial(rng, ring, 3) for _ in range(3))

        assert poly_arith(poly_arith(f, g, "add"), h, "add") == poly_arith(f, poly_arith(g, h, "add"), "add")
        assert poly_arith(poly_arith(f, g, "mul"), h, "mul") == poly_arith(f, poly_arith(g, h, "mul"), "mul")
        assert poly_arith(f, g, "add") == poly_arith(g, f, "add")
        assert poly_arith(f, g, "mul") == poly_arith(g, f, "mul")
        assert poly_arith(f, poly_arith(g, h, "add"), "mul") == poly_arith(
            poly_arith(f, g, "mul"), poly_arith(f, h, "mul"), "add"
        )


def test_poly_arith_rejects_ring_mismatch():
    other = RingDescriptor(("x", "y", "z"))
    with pytest.raises(RingMismatchError):
        poly_arith(R.parse("x"), other.parse("x"), "add")


def test_scalar_multiplication_in_prime_field():
    ring = RingDescriptor(("x",), GF(5))
    assert poly_arith(ring.parse("2*x"), 3, "scalar") == ring.parse("x")


@pytest.mark.parametrize(
    "ring, text, expected",
    [
        (R_FINE, "x^2*y", (2, 1)),
        (R, "x^2 + x*y", 2),
        (R, "x^2 + y", INHOMOGENEOUS),
    ],
)
def test_degree_of(ring, text, expected):
    assert degree_of(ring.parse(text)) == expected


@pytest.mark.parametrize(
    "ring, gens, expected",
    [
        (R, ["x^2", "x*y"], True),
        (R, ["x + y^2"], False),
        (R_FINE, ["x*y"], True),
        (R_FINE, ["x + y"], False),
    ],
)
def test_homogeneity_check(ring, gens, expected):
    assert homogeneity_check(ring.parse(g) for g in gens) == expected


def test_monomial_ideal_detection():
    assert is_monomial_ideal([R.parse("x^2"), R.parse("3*x*y")])
    assert not is_monomial_ideal([R.parse("x + y")])


@pytest.mark.parametrize("text", ["", "x +", "x^y", "z", "sin(x)", "x; y"])
def test_parse_rejects_bad_text(text):
    with pytest.raises(ValueError):
        R.parse(text)


def test_printing_is_canonical():
    f = R.parse("-y^2 + 1/2*x*y + x^2")
    assert str(f) == "x^2 + 1/2*x*y - y^2"
    assert R.parse(str(f)) == f


def test_make_field():
    assert make_field("Q") == QQ
    assert make_field("GF(7)").characteristic() == 7


@pytest.mark.parametrize("text", ["GF(8)", "GF(1)", "R", "GF(2147483659)"])
def test_make_field_rejects(text):
    with pytest.raises(ValueError):
        make_field(text)


def test_unrepresentable_coefficient_in_prime_field():
    ring = RingDescriptor(("x",), GF(3))
    with pytest.raises(ValueError):
        ring.parse("1/3*x")


def test_ring_validation():
    with pytest.raises(ValueError):
        RingDescriptor(())
    with pytest.raises(ValueError):
        RingDescriptor(("x", "x"))
    with pytest.raises(ValueError):
        RingDescriptor(("x",), QQ, "weird")


def test_monomials_of_degree():
    assert list(R.monomials_of_degree((2,))) == [(2, 0), (1, 1), (0, 2)]
    assert list(R_FINE.monomials_of_degree((1, 2))) == [(1, 2)]
    assert list(R_FINE.monomials_of_degree((-1, 2))) == []


def test_degree_window():
    window = DegreeWindow.uniform(-1, 1, 2)
    assert window.size == 9
    assert (0, 1) in window
    assert (2, 0) not in window
    assert list(window)[0] == (-1, -1)
    assert str(window) == "[-1..1]"
    assert str(DegreeWindow((0, -2), (1, 2))) == "[0..1, -2..2]"


def test_degree_window_cap():
    with pytest.raises(WindowSizeError):
        DegreeWindow.uniform(-50, 50, 3)


def test_degree_window_bounds():
    with pytest.raises(ValueError):
        DegreeWindow((1,), (0,))
