#
# fpmod.py
#
# Finitely presented graded modules: presentations, graded maps, kernels,
# Hom, Ext, minimal free resolutions, annihilators, supports, torsion and
# Hilbert functions.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from sympy.polys.monomials import monomial_divides

from filtergrade import groebner
from filtergrade.errors import RingMismatchError
from filtergrade.groebner import FreeModuleElement, GroebnerBasis
from filtergrade.ring_core import (
    Degree,
    DegreeLike,
    DegreeWindow,
    Polynomial,
    RingDescriptor,
    add_degrees,
    sub_degrees,
)

logger = logging.getLogger(__name__)


class ModulePresentation:
    """
    coker(F_1 -> F_0): generators e_j of degree gen_degrees[j], and relations
    given as elements of F_0 (the columns of the presentation matrix).
    """
    def __init__(
            self,
            ring: RingDescriptor,
            gen_degrees: Sequence[DegreeLike] = (),
            relations: Iterable[FreeModuleElement] = (),
    ):
        self.ring = ring
        self.gen_degrees = tuple(ring.as_degree(d) for d in gen_degrees)
        kept = []
        for relation in relations:
            if relation.ring != ring or relation.twists != self.gen_degrees:
                raise RingMismatchError("relation does not live in the module's free cover")
            if not relation:
                continue
            if relation.degree() is None:
                raise ValueError(f"inhomogeneous relation {relation}")
            kept.append(relation)
        self.relations = tuple(kept)

    @classmethod
    def free(cls, ring: RingDescriptor, degrees: Sequence[DegreeLike] = None) -> ModulePresentation:
        if degrees is None:
            degrees = [ring.zero_degree]
        return cls(ring, degrees)

    @classmethod
    def cyclic(cls, ring: RingDescriptor, ideal: Sequence[Polynomial], twist: DegreeLike = None) -> ModulePresentation:
        """R(-twist)/I, i.e. one generator of degree `twist`."""
        twist = ring.zero_degree if twist is None else ring.as_degree(twist)
        twists = (twist,)
        for g in ideal:
            if g and g.degree() is None:
                raise ValueError(f"inhomogeneous generator {g}")
        return cls(ring, twists, [FreeModuleElement(ring, twists, {0: g}) for g in ideal if g])

    @classmethod
    def from_rows(
            cls,
            ring: RingDescriptor,
            rows: Sequence[Sequence[Polynomial]],
            gen_degrees: Sequence[DegreeLike] = None,
    ) -> ModulePresentation:
        """Presentation matrix given by rows (one per generator); columns are relations."""
        if gen_degrees is None:
            gen_degrees = [ring.zero_degree] * len(rows)
        twists = tuple(ring.as_degree(d) for d in gen_degrees)
        if len(twists) != len(rows):
            raise ValueError(f"{len(rows)} rows but {len(twists)} twists")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("presentation matrix rows have different lengths")
        ncols = widths.pop() if widths else 0
        columns = [
            FreeModuleElement(ring, twists, {i: rows[i][j] for i in range(len(rows))})
            for j in range(ncols)
        ]
        return cls(ring, twists, columns)

    @property
    def ngens(self) -> int:
        return len(self.gen_degrees)

    @cached_property
    def relation_basis(self) -> GroebnerBasis:
        return groebner.buchberger(self.relations, ring=self.ring, twists=self.gen_degrees)

    def basis_element(self, index: int) -> FreeModuleElement:
        return FreeModuleElement.basis(self.ring, self.gen_degrees, index)

    def element(self, entries: Sequence[Polynomial]) -> FreeModuleElement:
        return FreeModuleElement.from_list(self.ring, self.gen_degrees, entries)

    def is_zero(self) -> bool:
        return all(self.relation_basis.contains(self.basis_element(j)) for j in range(self.ngens))

    def rows(self) -> list[list[Polynomial]]:
        return [[rel[i] for rel in self.relations] for i in range(self.ngens)]

    def with_ring(self, ring: RingDescriptor) -> ModulePresentation:
        """The same module over a ring with the same variables and another grading."""
        if ring == self.ring:
            return self
        twists = []
        for j, degree in enumerate(self.gen_degrees):
            twists.append((sum(degree),) if not ring.is_fine else degree)
        twists = tuple(twists)
        return ModulePresentation(ring, twists, [r.with_ring(ring, twists) for r in self.relations])

    def __str__(self):
        rows = "[" + ", ".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.rows()) + "]"
        twists = ", ".join(self.ring.format_degree(d) for d in self.gen_degrees)
        return f"coker {rows} twists ({twists})"

    __repr__ = __str__


class GradedMap:
    """
    Homomorphism source -> target of graded modules, given by the images of
    the source generators as elements of the target's free cover.
    Well-definedness (relations map into relations) is checked on construction.
    """
    def __init__(self, source: ModulePresentation, target: ModulePresentation, columns: Sequence[FreeModuleElement]):
        if source.ring != target.ring:
            raise RingMismatchError(f"ring mismatch: {source.ring} vs {target.ring}")
        columns = list(columns)
        if len(columns) != source.ngens:
            raise ValueError(f"map needs {source.ngens} columns, got {len(columns)}")
        degrees = set()
        for j, column in enumerate(columns):
            if column.twists != target.gen_degrees:
                raise ValueError("map column does not live in the target's free cover")
            if column:
                column_degree = column.degree()
                if column_degree is None:
                    raise ValueError(f"inhomogeneous map column {column}")
                degrees.add(sub_degrees(column_degree, source.gen_degrees[j]))
        if len(degrees) > 1:
            raise ValueError("map columns have inconsistent degree shifts")
        self.source = source
        self.target = target
        self.columns = tuple(columns)
        self.degree = degrees.pop() if degrees else source.ring.zero_degree
        for relation in source.relations:
            if not target.relation_basis.contains(self.lift(relation)):
                raise ValueError("map is not well defined: a relation maps outside the target relations")

    def lift(self, element: FreeModuleElement) -> FreeModuleElement:
        """Image of an element of the source's free cover, in the target's free cover."""
        image = FreeModuleElement(self.target.ring, self.target.gen_degrees)
        for j, coefficient in element.components.items():
            image = image + self.columns[j] * coefficient
        return image

    def matrix(self) -> list[list[Polynomial]]:
        return [[c[i] for c in self.columns] for i in range(self.target.ngens)]


class Subquotient(NamedTuple):
    module: ModulePresentation
    generators: list[FreeModuleElement]


def _degree_sort_key(degree: Degree):
    return sum(degree), degree


def minimal_generators(
        elements: Sequence[FreeModuleElement],
        *,
        ring: RingDescriptor,
        twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    """A minimal homogeneous generating subset, taken in increasing degree."""
    order = sorted(
        (i for i, e in enumerate(elements) if e),
        key=lambda i: (_degree_sort_key(elements[i].degree()), i),
    )
    kept: list[FreeModuleElement] = []
    basis = groebner.buchberger([], ring=ring, twists=twists)
    for i in order:
        if basis.contains(elements[i]):
            continue
        kept.append(elements[i])
        basis = groebner.buchberger(kept, ring=ring, twists=twists)
    return kept


def minimize_presentation(module: ModulePresentation) -> tuple[ModulePresentation, list[int]]:
    """
    Remove generators that a relation with a unit entry expresses through the
    others, then trim the relations to a minimal generating set.
    Returns the smaller presentation and the indices of the kept generators.
    """
    ring = module.ring
    field = ring.field
    alive = list(range(module.ngens))
    columns = [list(rel.entries()) for rel in module.relations]

    while True:
        found = None
        for c, column in enumerate(columns):
            for row in alive:
                entry = column[row]
                if entry and entry.is_constant():
                    found = (c, row)
                    break
            if found:
                break
        if found is None:
            break
        c, row = found
        pivot = columns.pop(c)
        inverse = field.one / pivot[row].terms[ring.zero_monomial]
        for other in columns:
            entry = other[row]
            if entry:
                factor = entry.scale(inverse)
                for i in alive:
                    if pivot[i]:
                        other[i] = other[i] - pivot[i] * factor
        alive.remove(row)

    twists = tuple(module.gen_degrees[i] for i in alive)
    relations = [FreeModuleElement(ring, twists, {k: column[i] for k, i in enumerate(alive)}) for column in columns]
    relations = minimal_generators(relations, ring=ring, twists=twists)
    return ModulePresentation(ring, twists, relations), alive


def subquotient(
        ring: RingDescriptor,
        twists: Sequence[Degree],
        sub: Sequence[FreeModuleElement],
        rel: Sequence[FreeModuleElement],
) -> Subquotient:
    """
    Presentation of (span(sub) + span(rel)) / span(rel), with generators the
    images of sub, for sub and rel inside the free module with the given twists.
    """
    sub = [s for s in sub if s]
    rel = [r for r in rel if r]
    if not sub:
        return Subquotient(ModulePresentation(ring, ()), [])
    degrees = []
    for s in sub:
        degree = s.degree()
        if degree is None:
            raise ValueError(f"inhomogeneous generator {s}")
        degrees.append(degree)
    relations = groebner.syzygies(sub + rel, degrees + [r.degree() for r in rel])
    module = ModulePresentation(ring, degrees, [r.restricted(range(len(sub)), degrees) for r in relations])
    minimal, kept = minimize_presentation(module)
    return Subquotient(minimal, [sub[k] for k in kept])


def zero_module(ring: RingDescriptor) -> ModulePresentation:
    return ModulePresentation(ring, ())


def direct_sum(first: ModulePresentation, second: ModulePresentation) -> ModulePresentation:
    if first.ring != second.ring:
        raise RingMismatchError(f"ring mismatch: {first.ring} vs {second.ring}")
    twists = first.gen_degrees + second.gen_degrees
    relations = [r.shifted(0, twists) for r in first.relations]
    relations += [r.shifted(first.ngens, twists) for r in second.relations]
    return ModulePresentation(first.ring, twists, relations)


def quotient(module: ModulePresentation, elements: Iterable[FreeModuleElement]) -> ModulePresentation:
    """module / (submodule generated by the images of elements)."""
    return ModulePresentation(module.ring, module.gen_degrees, list(module.relations) + list(elements))


def quotient_by_ideal(module: ModulePresentation, ideal: Sequence[Polynomial]) -> ModulePresentation:
    """M / aM."""
    extra = [
        FreeModuleElement(module.ring, module.gen_degrees, {j: g})
        for g in ideal if g
        for j in range(module.ngens)
    ]
    return quotient(module, extra)


def twist(module: ModulePresentation, shift: DegreeLike) -> ModulePresentation:
    """M(s), with M(s)_d = M_{s+d}: every generator degree drops by s."""
    shift = module.ring.as_degree(shift)
    twists = tuple(sub_degrees(d, shift) for d in module.gen_degrees)
    return ModulePresentation(module.ring, twists, [r.with_ring(module.ring, twists) for r in module.relations])


def kernel(f: GradedMap) -> ModulePresentation:
    source, target = f.source, f.target
    ring = source.ring
    if source.ngens == 0:
        return zero_module(ring)
    column_degrees = [add_degrees(d, f.degree) for d in source.gen_degrees]
    relations = list(target.relations)
    syz = groebner.syzygies(list(f.columns) + relations, column_degrees + [r.degree() for r in relations])
    lifted = [s.restricted(range(source.ngens), source.gen_degrees) for s in syz]
    return subquotient(ring, source.gen_degrees, lifted, source.relations).module


def _hom_twists(target: ModulePresentation, free_degrees: Sequence[Degree]) -> tuple[Degree, ...]:
    # Hom(R(-c), N) = N(c): generator (j, l) has degree deg N_l - c_j
    return tuple(sub_degrees(t, c) for c in free_degrees for t in target.gen_degrees)


def _block_relations(target: ModulePresentation, rank: int, twists: Sequence[Degree]) -> list[FreeModuleElement]:
    n0 = target.ngens
    return [
        FreeModuleElement(target.ring, twists, {j * n0 + l: p for l, p in rel.components.items()})
        for j in range(rank)
        for rel in target.relations
    ]


def _dual_columns(
        differential: Sequence[FreeModuleElement],
        source_rank: int,
        target: ModulePresentation,
        next_twists: Sequence[Degree],
) -> list[FreeModuleElement]:
    # columns of Hom(d, N): Hom(F_p, N) -> Hom(F_{p+1}, N) where d: F_{p+1} -> F_p;
    # basis vector (j, l) of Hom(F_p, N) goes to sum_k d[j][k] (k, l)
    n0 = target.ngens
    columns = []
    for j in range(source_rank):
        for l in range(n0):
            comps = {}
            for k, d_column in enumerate(differential):
                entry = d_column[j]
                if entry:
                    comps[k * n0 + l] = entry
            columns.append(FreeModuleElement(target.ring, next_twists, comps))
    return columns


def _dual_cohomology(
        degrees: Sequence[Sequence[Degree]],
        differentials: Sequence[Sequence[FreeModuleElement]],
        p: int,
        target: ModulePresentation,
) -> ModulePresentation:
    """H^p of Hom(F, N) for a complex of free modules F with the given degrees."""
    ring = target.ring
    if p >= len(degrees) or not degrees[p] or target.ngens == 0:
        return zero_module(ring)
    rank_p = len(degrees[p])
    twists_p = _hom_twists(target, degrees[p])

    if p + 1 < len(degrees) and degrees[p + 1]:
        next_twists = _hom_twists(target, degrees[p + 1])
        columns = _dual_columns(differentials[p], rank_p, target, next_twists)
        next_relations = _block_relations(target, len(degrees[p + 1]), next_twists)
        syz = groebner.syzygies(columns + next_relations, list(twists_p) + [r.degree() for r in next_relations])
        cycles = [s.restricted(range(len(columns)), twists_p) for s in syz]
    else:
        cycles = [FreeModuleElement.basis(ring, twists_p, i) for i in range(len(twists_p))]

    boundaries = _block_relations(target, rank_p, twists_p)
    if p >= 1:
        boundaries += _dual_columns(differentials[p - 1], len(degrees[p - 1]), target, twists_p)
    return subquotient(ring, twists_p, cycles, boundaries).module


def hom(source: ModulePresentation, target: ModulePresentation) -> ModulePresentation:
    """Hom_R(M, N) as the kernel of N^{gens M} -> N^{relations M}."""
    if source.ring != target.ring:
        raise RingMismatchError(f"ring mismatch: {source.ring} vs {target.ring}")
    relation_degrees = tuple(r.degree() for r in source.relations)
    return _dual_cohomology([source.gen_degrees, relation_degrees], [source.relations], 0, target)


@dataclass(frozen=True)
class FreeResolution:
    """
    F_L -> ... -> F_1 -> F_0: degrees[p] are the basis degrees of F_p and
    differentials[p - 1] holds the columns of d_p: F_p -> F_{p-1}.
    """
    ring: RingDescriptor
    degrees: tuple[tuple[Degree, ...], ...]
    differentials: tuple[tuple[FreeModuleElement, ...], ...]

    @property
    def ranks(self) -> list[int]:
        return [len(d) for d in self.degrees]

    @property
    def length(self) -> int:
        return len(self.degrees) - 1

    @property
    def maps(self) -> list[GradedMap]:
        free = [ModulePresentation.free(self.ring, d) for d in self.degrees]
        return [GradedMap(free[p], free[p - 1], self.differentials[p - 1]) for p in range(1, len(free))]

    def twists(self) -> list[Degree]:
        return [d for level in self.degrees for d in level]


def free_resolution(module: ModulePresentation, max_len: int = None) -> FreeResolution:
    """
    Minimal graded free resolution, truncated after F_max_len. The zero module
    has the empty resolution.
    """
    ring = module.ring
    if max_len is None:
        max_len = ring.nvars + 1
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    minimal, _ = minimize_presentation(module)
    if minimal.ngens == 0:
        return FreeResolution(ring, (), ())
    degrees = [minimal.gen_degrees]
    differentials = []
    current = list(minimal.relations)
    while current and len(degrees) <= max_len:
        level_degrees = tuple(c.degree() for c in current)
        degrees.append(level_degrees)
        differentials.append(tuple(current))
        syz = groebner.syzygies(current, level_degrees)
        current = minimal_generators(syz, ring=ring, twists=level_degrees)
    logger.debug("free resolution ranks %s", [len(d) for d in degrees])
    return FreeResolution(ring, tuple(degrees), tuple(differentials))


def projective_dimension(module: ModulePresentation) -> int:
    return free_resolution(module).length


def ext(i: int, source: ModulePresentation, target: ModulePresentation) -> ModulePresentation:
    """Ext^i_R(M, N) as cohomology of Hom(F, N) for a minimal resolution F of M."""
    if i < 0:
        raise ValueError("Ext index must be non-negative")
    if source.ring != target.ring:
        raise RingMismatchError(f"ring mismatch: {source.ring} vs {target.ring}")
    resolution = free_resolution(source, max_len=i + 1)
    return _dual_cohomology(resolution.degrees, resolution.differentials, i, target)


def ext_all(source: ModulePresentation, target: ModulePresentation, upto: int) -> list[ModulePresentation]:
    """[Ext^0, ..., Ext^upto] from a single resolution."""
    if source.ring != target.ring:
        raise RingMismatchError(f"ring mismatch: {source.ring} vs {target.ring}")
    resolution = free_resolution(source, max_len=upto + 1)
    return [_dual_cohomology(resolution.degrees, resolution.differentials, i, target) for i in range(upto + 1)]


def annihilator(module: ModulePresentation) -> list[Polynomial]:
    """Ann M as the intersection over generators of (relations :_F e_j)."""
    ring = module.ring
    if module.is_zero():
        return [ring.one()]
    relations = list(module.relations)
    result = None
    for j in range(module.ngens):
        e_j = module.basis_element(j)
        syz = groebner.syzygies([e_j] + relations, [module.gen_degrees[j]] + [r.degree() for r in relations])
        part = [s[0] for s in syz if s[0]]
        result = part if result is None else groebner.ideal_intersect(result, part, ring)
        if not result:
            return []
    return groebner.ideal_basis(result, ring).polynomials()


def support_in_V(module: ModulePresentation, ideal: Sequence[Polynomial]) -> bool:
    """Supp M ⊆ V(a): every generator of a lies in the radical of Ann M."""
    if module.is_zero():
        return True
    ann = annihilator(module)
    return all(groebner.radical_member(g, ann) for g in ideal if g)


def dim_module(module: ModulePresentation) -> int:
    if module.is_zero():
        return -1
    return groebner.dim_ideal(annihilator(module), module.ring)


def is_m_primary(ideal: Sequence[Polynomial], ring: RingDescriptor) -> bool:
    return all(groebner.radical_member(v, ideal) for v in ring.gens())


def gamma(ideal: Sequence[Polynomial], module: ModulePresentation) -> tuple[ModulePresentation, GradedMap]:
    """Γ_a(M) = (relations : <a>) / relations, with its inclusion into M."""
    ring = module.ring
    if not any(ideal):
        raise ValueError("Γ needs a nonzero ideal")
    if module.ngens == 0:
        zero = zero_module(ring)
        return zero, GradedMap(zero, module, [])
    saturation = groebner.saturate(module.relations, ideal, ring=ring, twists=module.gen_degrees)
    torsion, generators = subquotient(ring, module.gen_degrees, saturation, module.relations)
    return torsion, GradedMap(torsion, module, generators)


def hilbert_function(module: ModulePresentation, window: DegreeWindow) -> dict[Degree, int]:
    """dim_k M_d for d in the window, by counting standard monomials."""
    ring = module.ring
    gb = module.relation_basis
    leads: dict[int, list] = {}
    for pos, monomial in gb.leading_terms():
        leads.setdefault(pos, []).append(monomial)
    table = {}
    for degree in window:
        total = 0
        for j, gen_degree in enumerate(module.gen_degrees):
            blocked = leads.get(j, [])
            for monomial in ring.monomials_of_degree(sub_degrees(degree, gen_degree)):
                if not any(monomial_divides(lead, monomial) for lead in blocked):
                    total += 1
        table[tuple(degree)] = total
    return table


def resolution_is_exact(resolution: FreeResolution) -> bool:
    """Consecutive differentials compose to zero and each kernel equals the next image."""
    ring = resolution.ring
    for p in range(1, len(resolution.degrees)):
        twists = resolution.degrees[p]
        if p + 1 < len(resolution.degrees):
            for column in resolution.differentials[p]:
                image = FreeModuleElement(ring, resolution.degrees[p - 1])
                for k, coefficient in column.components.items():
                    image = image + resolution.differentials[p - 1][k] * coefficient
                if image:
                    return False
        cycles = groebner.syzygies(resolution.differentials[p - 1], twists)
        boundaries = list(resolution.differentials[p]) if p < len(resolution.differentials) else []
        if not groebner.same_submodule(cycles, boundaries, ring=ring, twists=twists):
            return False
    return True
