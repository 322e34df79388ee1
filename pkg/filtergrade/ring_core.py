#
# ring_core.py
#
# Graded polynomial rings over exact coefficient fields: ring descriptors,
# sparse polynomials, degrees and degree windows.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import itertools
import math
import re
import tokenize
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from sympy import Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys import Poly
from sympy.polys.domains import GF, QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.monomials import monomial_mul
from sympy.polys.orderings import grevlex, lex
from sympy.polys.polyerrors import BasePolynomialError

from filtergrade.errors import RingMismatchError, WindowSizeError

Monomial = tuple[int, ...]
Degree = tuple[int, ...]
DegreeLike = Union[int, Sequence[int]]

# marker for f-grad and index values that are not finite
INFINITY = math.inf

# marker returned by degree_of for polynomials with mixed-degree terms
INHOMOGENEOUS = "inhomogeneous"

GRADINGS = ("standard", "fine")
ORDERS = {"degrevlex": grevlex, "lex": lex}

WINDOW_CAP = 10 ** 5

_PRIME_LIMIT = 2 ** 31
_VARIABLE_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")
_POLY_CHARS = re.compile(r"[\sA-Za-z0-9_+\-*/^().]*$")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def make_field(text: str) -> Domain:
    """
    Parse a coefficient field name: "Q" (or "QQ") for the rationals, "GF(p)"
    for the prime field with p elements.
    """
    text = text.strip()
    if text in ("Q", "QQ"):
        return QQ
    match = re.match(r"GF\(\s*(\d+)\s*\)$", text)
    if match:
        p = int(match.group(1))
        if not _is_prime(p) or p >= _PRIME_LIMIT:
            raise ValueError(f"GF(p) needs a prime p < 2^31, got {p}")
        return GF(p)
    raise ValueError(f"unknown coefficient field {text!r}")


def field_name(field: Domain) -> str:
    if field.is_FiniteField:
        return f"GF({field.characteristic()})"
    return "Q"


def format_coefficient(field: Domain, c) -> str:
    """Text of a coefficient's magnitude: "3", "1/2"; prime-field residues in [0, p)."""
    if field.is_FiniteField:
        return str(int(c) % field.characteristic())
    num, den = abs(int(field.numer(c))), int(field.denom(c))
    return str(num) if den == 1 else f"{num}/{den}"


def coefficient_is_negative(field: Domain, c) -> bool:
    if field.is_FiniteField:
        return False
    return int(field.numer(c)) < 0


def convert_rational(field: Domain, numerator: int, denominator: int = 1):
    """Map the rational numerator/denominator into the coefficient field."""
    if field.is_FiniteField and denominator % field.characteristic() == 0:
        raise ValueError(
            f"coefficient {numerator}/{denominator} has no value in {field_name(field)}"
        )
    return field(numerator) / field(denominator)


def add_degrees(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def sub_degrees(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class RingDescriptor:
    """
    A polynomial ring k[x1..xn] with its grading and monomial order.

    In "standard" grading every variable has degree 1 and degrees are 1-tuples;
    in "fine" grading variable i has degree e_i and the degree of a monomial is
    its exponent vector.
    """
    variables: tuple[str, ...]
    field: Domain = QQ
    grading: str = "standard"
    order: str = "degrevlex"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables!r}")
        for name in self.variables:
            if not _VARIABLE_NAME.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if self.grading not in GRADINGS:
            raise ValueError(f"unknown grading {self.grading!r}")
        if self.order not in ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")

    def __str__(self):
        return f"{field_name(self.field)}[{','.join(self.variables)}]"

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_fine(self) -> bool:
        return self.grading == "fine"

    @property
    def order_key(self):
        return ORDERS[self.order]

    @property
    def degree_length(self) -> int:
        return self.nvars if self.is_fine else 1

    @cached_property
    def zero_monomial(self) -> Monomial:
        return (0,) * self.nvars

    @cached_property
    def zero_degree(self) -> Degree:
        return (0,) * self.degree_length

    def degree(self, monomial: Monomial) -> Degree:
        if self.is_fine:
            return tuple(monomial)
        return (sum(monomial),)

    def as_degree(self, value: DegreeLike) -> Degree:
        """Normalize an int or int sequence into a degree tuple for this ring."""
        if isinstance(value, int):
            if self.is_fine:
                raise ValueError(f"fine grading needs a degree vector of length {self.nvars}, got {value!r}")
            return (value,)
        value = tuple(int(v) for v in value)
        if len(value) != self.degree_length:
            raise ValueError(f"degree {value!r} should have length {self.degree_length}")
        return value

    def format_degree(self, degree: Degree) -> str:
        if self.is_fine:
            return f"({','.join(str(d) for d in degree)})"
        return str(degree[0])

    def monomials_of_degree(self, degree: Degree) -> Iterator[Monomial]:
        """All monomials of the given degree, in descending monomial order."""
        if self.is_fine:
            if all(d >= 0 for d in degree):
                yield tuple(degree)
            return
        (total,) = degree
        if total < 0:
            return
        found = []
        for combo in itertools.combinations_with_replacement(range(self.nvars), total):
            exps = [0] * self.nvars
            for idx in combo:
                exps[idx] += 1
            found.append(tuple(exps))
        yield from sorted(found, key=self.order_key, reverse=True)

    def coarsen(self) -> RingDescriptor:
        """The same ring with the standard grading."""
        if not self.is_fine:
            return self
        return RingDescriptor(self.variables, self.field, "standard", self.order)

    def extend(self, name: str) -> RingDescriptor:
        """The ring with one more variable appended, standard grading."""
        while name in self.variables:
            name += "_"
        return RingDescriptor(self.variables + (name,), self.field, "standard", self.order)

    # element constructors

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, value: int) -> Polynomial:
        return Polynomial(self, {self.zero_monomial: self.field(value)})

    def monomial(self, exponents: Sequence[int], coefficient=None) -> Polynomial:
        coefficient = self.field.one if coefficient is None else coefficient
        return Polynomial(self, {tuple(exponents): coefficient})

    def variable(self, which: Union[int, str]) -> Polynomial:
        index = self.variables.index(which) if isinstance(which, str) else which
        exps = [0] * self.nvars
        exps[index] = 1
        return self.monomial(exps)

    def gens(self) -> list[Polynomial]:
        return [self.variable(i) for i in range(self.nvars)]

    def monomial_text(self, monomial: Monomial) -> str:
        return "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(self.variables, monomial)
            if e
        )

    def parse(self, text: str) -> Polynomial:
        """
        Parse the polynomial text form, e.g. "3*x^2*y - 1/2*y^3".
        """
        if not text.strip():
            raise ValueError("empty polynomial text")
        if not _POLY_CHARS.match(text):
            raise ValueError(f"invalid characters in polynomial {text!r}")
        symbols = {name: Symbol(name) for name in self.variables}
        try:
            expr = parse_expr(text, local_dict=symbols, transformations=_TRANSFORMATIONS)
        except (SyntaxError, TypeError, SympifyError, tokenize.TokenError) as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
        unknown = {str(s) for s in getattr(expr, "free_symbols", ())} - set(self.variables)
        if unknown:
            raise ValueError(f"unknown variable(s) {', '.join(sorted(unknown))} in {text!r}")
        try:
            poly = Poly(expr, *symbols.values(), domain=QQ)
        except BasePolynomialError as exc:
            raise ValueError(f"{text!r} is not a polynomial") from exc
        terms = {}
        for monomial, coeff in poly.terms():
            if coeff == 0:
                continue
            num, den = int(coeff.p), int(coeff.q)
            value = convert_rational(self.field, num, den)
            if value:
                terms[tuple(monomial)] = value
        return Polynomial(self, terms)


class Polynomial:
    """
    Immutable sparse polynomial: a map from exponent tuples to nonzero field
    elements, tied to a RingDescriptor.
    """
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms: Mapping[Monomial, object] = ()):
        self.ring = ring
        cleaned = {}
        for monomial, coeff in dict(terms).items():
            if len(monomial) != ring.nvars:
                raise ValueError(f"monomial {monomial!r} does not fit ring {ring}")
            if coeff:
                cleaned[tuple(monomial)] = coeff
        self.terms = cleaned
        self._hash = None

    @classmethod
    def _trusted(cls, ring: RingDescriptor, terms: dict) -> Polynomial:
        poly = cls.__new__(cls)
        poly.ring = ring
        poly.terms = terms
        poly._hash = None
        return poly

    def _check_ring(self, other: Polynomial) -> None:
        if other.ring != self.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check_ring(other)
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        zero = self.ring.field.zero
        terms = dict(self.terms)
        for m, c in other.terms.items():
            value = terms.get(m, zero) + c
            if value:
                terms[m] = value
            else:
                terms.pop(m, None)
        return Polynomial._trusted(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._trusted(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        zero = self.ring.field.zero
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                value = terms.get(m, zero) + c1 * c2
                if value:
                    terms[m] = value
                else:
                    terms.pop(m, None)
        return Polynomial._trusted(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, coefficient) -> Polynomial:
        if not coefficient:
            return self.ring.zero()
        return Polynomial._trusted(self.ring, {m: c * coefficient for m, c in self.terms.items()})

    # comparison

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in descending monomial order."""
        key = self.ring.order_key
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]), reverse=True)

    @property
    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=self.ring.order_key)

    @property
    def leading_coefficient(self):
        return self.terms[self.leading_monomial]

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.sorted_terms()]

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {self.ring.zero_monomial}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, ring: RingDescriptor = None):
        """Common degree of all terms, or None if the terms disagree."""
        ring = ring or self.ring
        if not self.terms:
            raise ValueError("degree of zero undefined")
        degrees = {ring.degree(m) for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self.terms or self.degree() is not None

    def with_ring(self, ring: RingDescriptor) -> Polynomial:
        """The same terms over a ring with the same variables (e.g. a coarser grading)."""
        if ring.variables != self.ring.variables or ring.field != self.ring.field:
            raise RingMismatchError(f"cannot move {self} from {self.ring} to {ring}")
        return Polynomial._trusted(ring, dict(self.terms))

    def embed(self, ring: RingDescriptor) -> Polynomial:
        """Embed into a ring whose variable list extends this ring's."""
        extra = ring.nvars - self.ring.nvars
        if extra < 0 or ring.variables[:self.ring.nvars] != self.ring.variables:
            raise RingMismatchError(f"cannot embed {self.ring} into {ring}")
        return Polynomial._trusted(ring, {m + (0,) * extra: c for m, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        pieces = []
        for idx, (monomial, coeff) in enumerate(self.sorted_terms()):
            negative = coefficient_is_negative(field, coeff)
            magnitude = format_coefficient(field, coeff)
            mono_text = self.ring.monomial_text(monomial)
            if not mono_text:
                body = magnitude
            elif magnitude == "1":
                body = mono_text
            else:
                body = f"{magnitude}*{mono_text}"
            if idx == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, ring={self.ring})"


def poly_arith(f: Polynomial, g, op: str) -> Polynomial:
    """
    Exact ring operation: op is "add", "mul", or "scalar" (g is then a field
    element or an int).
    """
    if op == "scalar":
        if isinstance(g, int):
            g = f.ring.field(g)
        return f.scale(g)
    if not isinstance(g, Polynomial):
        raise TypeError(f"expected a Polynomial operand for {op!r}, got {type(g).__name__}")
    if f.ring != g.ring:
        raise RingMismatchError(f"ring mismatch: {f.ring} vs {g.ring}")
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown polynomial operation {op!r}")


def degree_of(f: Polynomial):
    """
    Degree of a homogeneous polynomial: an int in standard grading, a tuple in
    fine grading, INHOMOGENEOUS otherwise.
    """
    degree = f.degree()
    if degree is None:
        return INHOMOGENEOUS
    return degree if f.ring.is_fine else degree[0]


def homogeneity_check(gens: Iterable[Polynomial]) -> bool:
    return all(g.is_homogeneous() for g in gens)


def is_monomial_ideal(gens: Iterable[Polynomial]) -> bool:
    return all(g.is_monomial() for g in gens if g)


@dataclass(frozen=True)
class DegreeWindow:
    """
    Box of (multi)degrees low <= d <= high, componentwise; iterates in
    lexicographic order.
    """
    low: Degree
    high: Degree

    def __post_init__(self):
        object.__setattr__(self, "low", tuple(self.low))
        object.__setattr__(self, "high", tuple(self.high))
        if len(self.low) != len(self.high):
            raise ValueError(f"window bounds {self.low!r} and {self.high!r} differ in length")
        if any(lo > hi for lo, hi in zip(self.low, self.high)):
            raise ValueError(f"window low {self.low!r} exceeds high {self.high!r}")
        if self.size > WINDOW_CAP:
            raise WindowSizeError(f"window of {self.size} lattice points exceeds the cap of {WINDOW_CAP}")

    @classmethod
    def uniform(cls, lo: int, hi: int, length: int) -> DegreeWindow:
        return cls((lo,) * length, (hi,) * length)

    @property
    def size(self) -> int:
        return math.prod(hi - lo + 1 for lo, hi in zip(self.low, self.high))

    def __len__(self):
        return self.size

    def __iter__(self) -> Iterator[Degree]:
        return itertools.product(*(range(lo, hi + 1) for lo, hi in zip(self.low, self.high)))

    def __contains__(self, degree) -> bool:
        return all(lo <= d <= hi for lo, d, hi in zip(self.low, degree, self.high))

    def enlarged(self, below: Sequence[int], above: Sequence[int]) -> DegreeWindow:
        return DegreeWindow(
            tuple(lo - b for lo, b in zip(self.low, below)),
            tuple(hi + a for hi, a in zip(self.high, above)),
        )

    def __str__(self):
        if len(set(self.low)) == 1 and len(set(self.high)) == 1:
            return f"[{self.low[0]}..{self.high[0]}]"
        return "[" + ", ".join(f"{lo}..{hi}" for lo, hi in zip(self.low, self.high)) + "]"
