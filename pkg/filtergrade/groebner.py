#
# groebner.py
#
# Buchberger engine for ideals and submodules of twisted free modules, and the
# operations built on it: normal forms, syzygies, colons, saturations,
# intersections, radical membership and Krull dimension.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm, monomial_mul

from filtergrade.errors import RingMismatchError
from filtergrade.ring_core import Degree, Monomial, Polynomial, RingDescriptor, add_degrees

logger = logging.getLogger(__name__)

ModuleTerm = tuple[int, Monomial]


class FreeModuleElement:
    """
    Sparse element of the free module R(-t_0) + ... + R(-t_{r-1}), where t_i
    is the degree of the i-th basis vector.
    """
    __slots__ = ("ring", "twists", "components")

    def __init__(self, ring: RingDescriptor, twists: Sequence[Degree], components: Mapping[int, Polynomial] = ()):
        self.ring = ring
        self.twists = tuple(twists)
        comps = {}
        for index, poly in dict(components).items():
            if not 0 <= index < len(self.twists):
                raise ValueError(f"component index {index} outside rank {len(self.twists)}")
            if poly.ring != ring:
                raise RingMismatchError(f"ring mismatch: {poly.ring} vs {ring}")
            if poly:
                comps[index] = poly
        self.components = comps

    @classmethod
    def basis(cls, ring: RingDescriptor, twists: Sequence[Degree], index: int) -> FreeModuleElement:
        return cls(ring, twists, {index: ring.one()})

    @classmethod
    def from_list(cls, ring: RingDescriptor, twists: Sequence[Degree], entries: Sequence[Polynomial]) -> FreeModuleElement:
        if len(entries) != len(twists):
            raise ValueError(f"expected {len(twists)} entries, got {len(entries)}")
        return cls(ring, twists, dict(enumerate(entries)))

    @classmethod
    def from_vector(cls, ring: RingDescriptor, twists: Sequence[Degree], vector: Mapping[ModuleTerm, object]) -> FreeModuleElement:
        by_position: dict[int, dict] = {}
        for (pos, monomial), coeff in vector.items():
            by_position.setdefault(pos, {})[monomial] = coeff
        return cls(ring, twists, {pos: Polynomial(ring, terms) for pos, terms in by_position.items()})

    def to_vector(self) -> dict[ModuleTerm, object]:
        return {
            (pos, monomial): coeff
            for pos, poly in self.components.items()
            for monomial, coeff in poly.terms.items()
        }

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __getitem__(self, index: int) -> Polynomial:
        return self.components.get(index) or self.ring.zero()

    def entries(self) -> list[Polynomial]:
        return [self[i] for i in range(self.rank)]

    def _check(self, other: FreeModuleElement) -> None:
        if other.ring != self.ring or other.twists != self.twists:
            raise RingMismatchError("free module elements live in different modules")

    def __add__(self, other: FreeModuleElement) -> FreeModuleElement:
        self._check(other)
        comps = dict(self.components)
        for idx, poly in other.components.items():
            comps[idx] = comps[idx] + poly if idx in comps else poly
        return FreeModuleElement(self.ring, self.twists, comps)

    def __neg__(self) -> FreeModuleElement:
        return FreeModuleElement(self.ring, self.twists, {i: -p for i, p in self.components.items()})

    def __sub__(self, other: FreeModuleElement) -> FreeModuleElement:
        return self + (-other)

    def __mul__(self, factor) -> FreeModuleElement:
        if isinstance(factor, int):
            factor = self.ring.constant(factor)
        if not isinstance(factor, Polynomial):
            return NotImplemented
        return FreeModuleElement(self.ring, self.twists, {i: p * factor for i, p in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FreeModuleElement):
            return NotImplemented
        return self.ring == other.ring and self.twists == other.twists and self.components == other.components

    def __hash__(self):
        return hash((self.twists, frozenset(self.components.items())))

    def __bool__(self):
        return bool(self.components)

    def degree(self) -> Optional[Degree]:
        """Common degree of all terms (twist included), or None if inhomogeneous or zero."""
        degrees = {
            add_degrees(self.ring.degree(m), self.twists[pos])
            for pos, poly in self.components.items()
            for m in poly.terms
        }
        return degrees.pop() if len(degrees) == 1 else None

    def is_homogeneous(self) -> bool:
        return not self.components or self.degree() is not None

    def restricted(self, positions: Sequence[int], twists: Sequence[Degree]) -> FreeModuleElement:
        """Projection onto the given positions, renumbered 0..len(positions)-1."""
        return FreeModuleElement(self.ring, twists, {i: self[p] for i, p in enumerate(positions)})

    def shifted(self, offset: int, twists: Sequence[Degree]) -> FreeModuleElement:
        """The same components moved to positions offset.., inside a larger module."""
        return FreeModuleElement(self.ring, twists, {i + offset: p for i, p in self.components.items()})

    def with_ring(self, ring: RingDescriptor, twists: Sequence[Degree]) -> FreeModuleElement:
        return FreeModuleElement(ring, twists, {i: p.with_ring(ring) for i, p in self.components.items()})

    def __str__(self):
        return "[" + ", ".join(str(p) for p in self.entries()) + "]"

    __repr__ = __str__


def ideal_element(poly: Polynomial) -> FreeModuleElement:
    ring = poly.ring
    return FreeModuleElement(ring, (ring.zero_degree,), {0: poly})


def term_order_key(ring: RingDescriptor):
    """Position-over-term: a lower position is larger, then the ring's monomial order."""
    order = ring.order_key

    def key(term: ModuleTerm):
        return -term[0], order(term[1])
    return key


def _add_multiple(target: dict, source: Mapping, coeff, monomial: Monomial, zero) -> None:
    # target += coeff * x^monomial * source
    for (pos, m), c in source.items():
        term = (pos, monomial_mul(m, monomial))
        value = target.get(term, zero) + coeff * c
        if value:
            target[term] = value
        else:
            target.pop(term, None)


@dataclass
class _BasisElement:
    vector: dict
    lead: ModuleTerm
    sugar: int


def _make_monic(vector: dict, key, field, sugar: int) -> _BasisElement:
    lead = max(vector, key=key)
    inverse = field.one / vector[lead]
    return _BasisElement({t: c * inverse for t, c in vector.items()}, lead, sugar)


def _find_reducer(term: ModuleTerm, basis: Sequence[_BasisElement]) -> Optional[_BasisElement]:
    pos, monomial = term
    for element in basis:
        if element.lead[0] == pos and monomial_divides(element.lead[1], monomial):
            return element
    return None


def _reduce(vector: Mapping, basis: Sequence[_BasisElement], key, field) -> dict:
    """Full reduction of vector modulo basis (monic elements); returns the remainder."""
    work = dict(vector)
    remainder = {}
    zero = field.zero
    while work:
        lead = max(work, key=key)
        coeff = work[lead]
        reducer = _find_reducer(lead, basis)
        if reducer is None:
            remainder[lead] = coeff
            del work[lead]
            continue
        quotient = monomial_div(lead[1], reducer.lead[1])
        _add_multiple(work, reducer.vector, -coeff, quotient, zero)
    return remainder


def _vector_sugar(vector: Mapping, weights: Sequence[int]) -> int:
    return max(sum(m) + weights[pos] for pos, m in vector)


def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


def _chain_criterion(i: int, j: int, lcm: Monomial, basis: Sequence[_BasisElement], pairs: set) -> bool:
    pos = basis[i].lead[0]
    for k, element in enumerate(basis):
        if k in (i, j) or element.lead[0] != pos:
            continue
        if not monomial_divides(element.lead[1], lcm):
            continue
        if _pair(i, k) in pairs or _pair(j, k) in pairs:
            continue
        return True
    return False


def _s_vector(bi: _BasisElement, bj: _BasisElement, lcm: Monomial, zero) -> dict:
    vector = {}
    _add_multiple(vector, bi.vector, bi.vector[bi.lead], monomial_div(lcm, bi.lead[1]), zero)
    _add_multiple(vector, bj.vector, -bj.vector[bj.lead], monomial_div(lcm, bj.lead[1]), zero)
    return vector


class GroebnerBasis:
    """
    Reduced Gröbner basis of a submodule of a twisted free module, under the
    position-over-term order. Rank 1 is the ideal case.
    """
    def __init__(self, ring: RingDescriptor, twists: Sequence[Degree], elements: Sequence[_BasisElement]):
        self.ring = ring
        self.twists = tuple(twists)
        self._elements = list(elements)
        self._key = term_order_key(ring)
        self.reduced = True

    @property
    def order(self) -> str:
        return f"position-over-{self.ring.order}"

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def generators(self) -> list[FreeModuleElement]:
        return [FreeModuleElement.from_vector(self.ring, self.twists, e.vector) for e in self._elements]

    def polynomials(self) -> list[Polynomial]:
        """Generators of a rank 1 basis, as polynomials."""
        return [g[0] for g in self.generators]

    def leading_terms(self) -> list[ModuleTerm]:
        return [e.lead for e in self._elements]

    def leading_monomials(self, position: int = 0) -> list[Monomial]:
        return [m for pos, m in self.leading_terms() if pos == position]

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self.generators)

    def _reduce_vector(self, vector: Mapping) -> dict:
        return _reduce(vector, self._elements, self._key, self.ring.field)

    def normal_form(self, element: FreeModuleElement) -> FreeModuleElement:
        if element.ring != self.ring or element.twists != self.twists:
            raise RingMismatchError("element and Gröbner basis live in different modules")
        return FreeModuleElement.from_vector(self.ring, self.twists, self._reduce_vector(element.to_vector()))

    def contains(self, element: FreeModuleElement) -> bool:
        return not self._reduce_vector(element.to_vector())

    def contains_all(self, elements: Iterable[FreeModuleElement]) -> bool:
        return all(self.contains(e) for e in elements)

    def contains_polynomial(self, poly: Polynomial) -> bool:
        return self.contains(FreeModuleElement(self.ring, self.twists, {0: poly}))

    def is_unit_ideal(self) -> bool:
        return self.rank == 1 and any(not any(m) for _, m in self.leading_terms())

    def satisfies_buchberger_criterion(self) -> bool:
        """Every S-vector of a pair with equal lead positions reduces to zero."""
        zero = self.ring.field.zero
        for bi, bj in itertools.combinations(self._elements, 2):
            if bi.lead[0] != bj.lead[0]:
                continue
            lcm = monomial_lcm(bi.lead[1], bj.lead[1])
            if self._reduce_vector(_s_vector(bi, bj, lcm, zero)):
                return False
        return True

    def is_reduced(self) -> bool:
        field = self.ring.field
        for element in self._elements:
            if element.vector[element.lead] != field.one:
                return False
            others = [e for e in self._elements if e is not element]
            if any(_find_reducer(term, others) for term in element.vector):
                return False
        return True

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.generators) + "}"


def buchberger(
        gens: Sequence[FreeModuleElement],
        *,
        ring: RingDescriptor = None,
        twists: Sequence[Degree] = None,
) -> GroebnerBasis:
    """
    Reduced Gröbner basis of the submodule generated by gens. Pairs are taken
    by lowest sugar; the coprime-leading-term criterion is used for ideals,
    the chain criterion for all ranks.
    """
    gens = list(gens)
    if gens:
        ring, twists = gens[0].ring, gens[0].twists
        for g in gens:
            g._check(gens[0])
    elif ring is None or twists is None:
        raise ValueError("ring and twists are required for an empty generating set")
    twists = tuple(twists)

    key = term_order_key(ring)
    field = ring.field
    zero = field.zero
    weights = [sum(t) for t in twists]
    is_ideal = len(twists) == 1

    basis: list[_BasisElement] = []
    pairs: set[tuple[int, int]] = set()
    pair_info: dict[tuple[int, int], tuple[int, Monomial]] = {}

    def add(vector: dict, sugar: int) -> None:
        element = _make_monic(vector, key, field, sugar)
        index = len(basis)
        basis.append(element)
        for j, other in enumerate(basis[:-1]):
            if other.lead[0] != element.lead[0]:
                continue
            lcm = monomial_lcm(other.lead[1], element.lead[1])
            d_lcm = sum(lcm)
            pair_sugar = max(
                other.sugar + d_lcm - sum(other.lead[1]),
                element.sugar + d_lcm - sum(element.lead[1]),
            )
            pairs.add((j, index))
            pair_info[(j, index)] = (pair_sugar, lcm)

    for g in gens:
        vector = g.to_vector()
        if not vector:
            continue
        remainder = _reduce(vector, basis, key, field)
        if remainder:
            add(remainder, _vector_sugar(vector, weights))

    order = ring.order_key
    processed = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (pair_info[p][0], order(pair_info[p][1]), p))
        pairs.remove((i, j))
        pair_sugar, lcm = pair_info.pop((i, j))
        bi, bj = basis[i], basis[j]
        if is_ideal and monomial_mul(bi.lead[1], bj.lead[1]) == lcm:
            continue
        if _chain_criterion(i, j, lcm, basis, pairs):
            continue
        processed += 1
        remainder = _reduce(_s_vector(bi, bj, lcm, zero), basis, key, field)
        if remainder:
            add(remainder, pair_sugar)

    # drop elements whose leading term is divisible by another's, then reduce tails
    minimal = []
    for idx, element in enumerate(basis):
        if any(
            other.lead[0] == element.lead[0]
            and monomial_divides(other.lead[1], element.lead[1])
            and (other.lead != element.lead or jdx < idx)
            for jdx, other in enumerate(basis)
            if jdx != idx
        ):
            continue
        minimal.append(element)

    reduced = []
    for element in minimal:
        others = [e for e in minimal if e is not element]
        vector = _reduce(element.vector, others, key, field)
        reduced.append(_BasisElement(vector, element.lead, element.sugar))
    reduced.sort(key=lambda e: key(e.lead), reverse=True)

    logger.debug("Gröbner basis: %d generators in, %d pairs reduced, %d elements out", len(gens), processed, len(reduced))
    return GroebnerBasis(ring, twists, reduced)


def ideal_basis(polys: Iterable[Polynomial], ring: RingDescriptor) -> GroebnerBasis:
    return buchberger([ideal_element(p) for p in polys if p], ring=ring, twists=(ring.zero_degree,))


def normal_form(element, gb: GroebnerBasis):
    """Remainder of element (a FreeModuleElement or, for ideals, a Polynomial) modulo gb."""
    if isinstance(element, Polynomial):
        return gb.normal_form(ideal_element(element))[0]
    return gb.normal_form(element)


def _column_degree(column: FreeModuleElement, ring: RingDescriptor) -> Degree:
    return column.degree() or ring.zero_degree


def syzygies(
        columns: Sequence[FreeModuleElement],
        degrees: Sequence[Degree] = None,
) -> list[FreeModuleElement]:
    """
    Generators of the module of relations sum a_j c_j = 0 among the columns,
    as elements of the free module with basis degrees `degrees` (default: the
    column degrees). Computed from a Gröbner basis of the columns augmented by
    tag coordinates, with the tags placed after the original positions.
    """
    columns = list(columns)
    if not columns:
        return []
    ring = columns[0].ring
    rank = columns[0].rank
    for c in columns:
        c._check(columns[0])
    if degrees is None:
        degrees = [_column_degree(c, ring) for c in columns]
    degrees = tuple(degrees)

    augmented_twists = columns[0].twists + degrees
    one = ring.field.one
    augmented = []
    for j, column in enumerate(columns):
        vector = column.to_vector()
        vector[(rank + j, ring.zero_monomial)] = one
        augmented.append(FreeModuleElement.from_vector(ring, augmented_twists, vector))

    gb = buchberger(augmented)
    tags = range(rank, rank + len(columns))
    result = []
    for lead, element in zip(gb.leading_terms(), gb.generators):
        if lead[0] >= rank:
            result.append(element.restricted(tags, degrees))
    return result


def intersect(
        first: Sequence[FreeModuleElement],
        second: Sequence[FreeModuleElement],
        *,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    """Reduced Gröbner generators of span(first) ∩ span(second)."""
    first = [f for f in first if f]
    second = [s for s in second if s]
    if not first or not second:
        return []
    relations = syzygies(first + second)
    meet = []
    for relation in relations:
        combination = FreeModuleElement(ring, twists)
        for k, f in enumerate(first):
            coefficient = relation[k]
            if coefficient:
                combination = combination + f * coefficient
        meet.append(combination)
    return buchberger(meet, ring=ring, twists=twists).generators


def colon(
        submodule: Sequence[FreeModuleElement],
        x: Polynomial,
        *,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    """Reduced Gröbner generators of {f in F : x f in U}, U = span(submodule)."""
    if not x:
        raise ValueError("colon by the zero polynomial")
    twists = tuple(twists)
    rank = len(twists)
    x_degree = x.degree() or ring.zero_degree
    scaled = [FreeModuleElement(ring, twists, {i: x}) for i in range(rank)]
    degrees = [add_degrees(t, x_degree) for t in twists]
    gens = [u for u in submodule if u]
    relations = syzygies(scaled + gens, degrees + [_column_degree(u, ring) for u in gens])
    quotient = [r.restricted(range(rank), twists) for r in relations]
    return buchberger(quotient, ring=ring, twists=twists).generators


def colon_ideal(
        submodule: Sequence[FreeModuleElement],
        ideal: Sequence[Polynomial],
        *,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    """{f in F : g f in U for every g in the ideal}."""
    ideal = [g for g in ideal if g]
    if not ideal:
        raise ValueError("colon by the zero ideal")
    result = None
    for g in ideal:
        part = colon(submodule, g, ring=ring, twists=twists)
        result = part if result is None else intersect(result, part, ring=ring, twists=twists)
    return result


def _saturate_by_element(
        submodule: Sequence[FreeModuleElement],
        g: Polynomial,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    current = buchberger(submodule, ring=ring, twists=twists)
    steps = 0
    while True:
        widened = colon(current.generators, g, ring=ring, twists=twists)
        steps += 1
        if current.contains_all(widened):
            logger.debug("saturation by %s stable after %d colon steps", g, steps)
            return current.generators
        current = buchberger(widened, ring=ring, twists=twists)


def saturate(
        submodule: Sequence[FreeModuleElement],
        ideal: Sequence[Polynomial],
        *,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    """
    Reduced Gröbner generators of U : <a> = union of (U : a^k). Each generator
    g of a is saturated by iterating the colon until it is stable; the results
    are intersected, since (U : <a>) is the intersection of the (U : <g>).
    """
    ideal = [g for g in ideal if g]
    if not ideal:
        raise ValueError("saturation by the zero ideal")
    result = None
    for g in ideal:
        part = _saturate_by_element(submodule, g, ring, twists)
        result = part if result is None else intersect(result, part, ring=ring, twists=twists)
    return result


def _polys(elements: Iterable[FreeModuleElement]) -> list[Polynomial]:
    return [e[0] for e in elements]


def ideal_colon(ideal: Sequence[Polynomial], x: Polynomial, ring: RingDescriptor) -> list[Polynomial]:
    return _polys(colon([ideal_element(p) for p in ideal if p], x, ring=ring, twists=(ring.zero_degree,)))


def ideal_saturate(ideal: Sequence[Polynomial], by: Sequence[Polynomial], ring: RingDescriptor) -> list[Polynomial]:
    return _polys(saturate([ideal_element(p) for p in ideal if p], by, ring=ring, twists=(ring.zero_degree,)))


def ideal_intersect(first: Sequence[Polynomial], second: Sequence[Polynomial], ring: RingDescriptor) -> list[Polynomial]:
    return _polys(intersect(
        [ideal_element(p) for p in first if p],
        [ideal_element(p) for p in second if p],
        ring=ring,
        twists=(ring.zero_degree,),
    ))


def radical_member(f: Polynomial, ideal: Sequence[Polynomial]) -> bool:
    """
    True iff f lies in the radical of the ideal: 1 is in (I, 1 - t f) over
    the ring extended by a fresh variable t.
    """
    ring = f.ring
    if not f:
        return True
    gb = ideal_basis(ideal, ring)
    if gb.contains_polynomial(f):
        return True
    if all(p.is_monomial() for p in ideal if p) and f.is_monomial():
        # a monomial lies in the radical of a monomial ideal iff its support
        # contains the support of some generator
        support = {i for i, e in enumerate(f.leading_monomial) if e}
        return any(
            {i for i, e in enumerate(p.leading_monomial) if e} <= support
            for p in ideal if p
        )
    extended = ring.extend("t")
    t = extended.variable(extended.nvars - 1)
    gens = [p.embed(extended) for p in ideal if p]
    gens.append(extended.one() - t * f.embed(extended))
    return ideal_basis(gens, extended).is_unit_ideal()


def ideal_contains(ideal: Sequence[Polynomial], polys: Iterable[Polynomial], ring: RingDescriptor) -> bool:
    gb = ideal_basis(ideal, ring)
    return all(gb.contains_polynomial(p) for p in polys)


def same_ideal(first: Sequence[Polynomial], second: Sequence[Polynomial], ring: RingDescriptor) -> bool:
    return ideal_contains(first, second, ring) and ideal_contains(second, first, ring)


def same_submodule(
        first: Sequence[FreeModuleElement],
        second: Sequence[FreeModuleElement],
        *,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> bool:
    return (
        buchberger(first, ring=ring, twists=twists).contains_all(second)
        and buchberger(second, ring=ring, twists=twists).contains_all(first)
    )


def dim_ideal(ideal: Sequence[Polynomial], ring: RingDescriptor) -> int:
    """
    Krull dimension of R/I: the largest set of variables independent modulo
    the leading-monomial ideal; -1 when I = (1).
    """
    gb = ideal_basis(ideal, ring)
    if gb.is_unit_ideal():
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials()]
    for size in range(ring.nvars, -1, -1):
        for subset in itertools.combinations(range(ring.nvars), size):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0
