#
# filterreg.py
#
# Filter regular elements and sequences, sequence search, and the filter grade
# with its cross-checked characterizations.
#
# All computations here run over the standard grading: combinations such as
# x + y, needed to avoid several primes at once, are homogeneous only there.
# Fine-graded inputs are coarsened on entry; returned polynomials are moved
# back to the caller's ring.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

from filtergrade import cechloc, fpmod, groebner
from filtergrade.errors import InconsistentCertificatesError, NotAdmissibleError
from filtergrade.groebner import FreeModuleElement
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import INFINITY, ORDERS, Polynomial, RingDescriptor, is_monomial_ideal

logger = logging.getLogger(__name__)

SEARCH_ORDERS = ("forward", "reverse")
MAX_COEFFICIENT_HEIGHT = 3

Grade = Union[int, float]


class StepWitness(NamedTuple):
    element: Polynomial
    verdict: bool
    colon_module: ModulePresentation
    annihilator: list[Polynomial]


@dataclass
class FilterSequenceReport:
    sequence: list[Polynomial]
    verdict_per_step: list[bool]
    witnesses: list[StepWitness]

    @property
    def verdict(self) -> bool:
        return all(self.verdict_per_step)


@dataclass
class EquivalenceAudit:
    """
    Per-step verdicts of the colon-support condition and of the
    colon-inside-saturation condition, plus the verdicts of powered sequences.
    """
    sequence: list[Polynomial]
    support_condition: list[bool]
    saturation_condition: list[bool]
    powered: dict[tuple[int, ...], bool]

    @property
    def consistent(self) -> bool:
        if self.support_condition != self.saturation_condition:
            return False
        if all(self.support_condition):
            return all(self.powered.values())
        return True


@dataclass
class SequenceSearch:
    sequence: list[Polynomial]
    target_len: int
    certificate: Optional[Grade] = None
    exhausted: bool = False
    candidates_tried: int = 0

    @property
    def complete(self) -> bool:
        return len(self.sequence) >= self.target_len

    @property
    def certified(self) -> bool:
        return self.complete or self.certificate is not None


@dataclass
class FGradeResult:
    value: Grade
    sequence: Optional[list[Polynomial]] = None
    constructive_value: Optional[Grade] = None
    ext_certificate: Optional[Grade] = None
    lc_certificate: Optional[Grade] = None
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        present = [
            v for v in (self.constructive_value, self.ext_certificate, self.lc_certificate)
            if v is not None
        ]
        return all(v == self.value for v in present)


class ModuleGradeResult(NamedTuple):
    ext_value: Grade
    fgrade_value: Grade

    @property
    def agree(self) -> bool:
        return self.ext_value == self.fgrade_value


def _standard_ring(ring: RingDescriptor) -> RingDescriptor:
    return ring.coarsen()


def _polys(polys: Sequence[Polynomial], ring: RingDescriptor) -> list[Polynomial]:
    return [p.with_ring(ring) for p in polys]


def _sequence_relations(module: ModulePresentation, xs: Sequence[Polynomial]) -> list[FreeModuleElement]:
    """Relations of M/(xs)M in the free cover of M."""
    relations = list(module.relations)
    for x in xs:
        if not x:
            continue
        for l in range(module.ngens):
            relations.append(FreeModuleElement(module.ring, module.gen_degrees, {l: x}))
    return relations


def _check_element(x: Polynomial) -> None:
    if not x:
        raise ValueError("filter regular element must be nonzero")
    if x.degree() is None:
        raise ValueError(f"filter regular element {x} must be homogeneous")


def _in_radical(ideal: Sequence[Polynomial], annihilator: Sequence[Polynomial]) -> bool:
    return all(groebner.radical_member(g, annihilator) for g in ideal if g)


def _step_witness(
        a: Sequence[Polynomial],
        x: Polynomial,
        module: ModulePresentation,
        previous: Sequence[Polynomial],
) -> StepWitness:
    # module, a, x and previous already over the standard grading
    ring = module.ring
    _check_element(x)
    if module.ngens == 0:
        zero = fpmod.zero_module(ring)
        return StepWitness(x, True, zero, [ring.one()])
    relations = _sequence_relations(module, previous)
    widened = groebner.colon(relations, x, ring=ring, twists=module.gen_degrees)
    colon_module = fpmod.subquotient(ring, module.gen_degrees, widened, relations).module
    ann = fpmod.annihilator(colon_module)
    return StepWitness(x, _in_radical(a, ann), colon_module, ann)


def is_fr_element(
        a: Sequence[Polynomial],
        x: Polynomial,
        module: ModulePresentation,
        previous: Sequence[Polynomial] = (),
) -> bool:
    """
    True iff Supp((U :_M x)/U) ⊆ V(a), with U = (previous)M.
    """
    ring = _standard_ring(module.ring)
    return _step_witness(
        _polys(a, ring), x.with_ring(ring), module.with_ring(ring), _polys(previous, ring)
    ).verdict


def is_fr_sequence(a: Sequence[Polynomial], xs: Sequence[Polynomial], module: ModulePresentation) -> FilterSequenceReport:
    ring = _standard_ring(module.ring)
    a_std, xs_std, m_std = _polys(a, ring), _polys(xs, ring), module.with_ring(ring)
    witnesses = [_step_witness(a_std, x, m_std, xs_std[:i]) for i, x in enumerate(xs_std)]
    return FilterSequenceReport(list(xs), [w.verdict for w in witnesses], witnesses)


def equivalence_audit(
        a: Sequence[Polynomial],
        xs: Sequence[Polynomial],
        module: ModulePresentation,
        powers: Sequence[Sequence[int]] = ((2, 3),),
) -> EquivalenceAudit:
    """
    Check, step by step, the colon-support condition against the containment
    (x_1..x_{i-1})M :_M x_i ⊆ (x_1..x_{i-1})M :_M <a>, and rerun the sequence
    with its elements raised to each given power vector (missing exponents
    default to 1).
    """
    ring = _standard_ring(module.ring)
    a_std, xs_std, m_std = _polys(a, ring), _polys(xs, ring), module.with_ring(ring)
    twists = m_std.gen_degrees
    nonzero_a = [g for g in a_std if g]

    support, saturation = [], []
    for i, x in enumerate(xs_std):
        support.append(_step_witness(a_std, x, m_std, xs_std[:i]).verdict)
        if not nonzero_a or m_std.ngens == 0:
            saturation.append(True)
            continue
        relations = _sequence_relations(m_std, xs_std[:i])
        widened = groebner.colon(relations, x, ring=ring, twists=twists)
        saturated = groebner.saturate(relations, nonzero_a, ring=ring, twists=twists)
        saturation.append(groebner.buchberger(saturated, ring=ring, twists=twists).contains_all(widened))

    powered = {}
    for vector in powers:
        exponents = tuple(vector[:len(xs)]) + (1,) * max(0, len(xs) - len(vector))
        if any(e < 1 for e in exponents):
            raise ValueError(f"power vector {tuple(vector)!r} must be positive")
        raised = [x ** e for x, e in zip(xs_std, exponents)]
        powered[exponents] = is_fr_sequence(a_std, raised, m_std).verdict

    return EquivalenceAudit(list(xs), support, saturation, powered)


def _monomials_in_ideal(
        b: Sequence[Polynomial],
        ring: RingDescriptor,
        degree: int,
) -> list[Polynomial]:
    gb = groebner.ideal_basis(b, ring)
    found = []
    for monomial in sorted(ring.monomials_of_degree((degree,)), key=ORDERS["lex"], reverse=True):
        candidate = ring.monomial(monomial)
        if gb.contains_polynomial(candidate):
            found.append(candidate)
    return found


def _lifted_generators(b: Sequence[Polynomial], degree: int) -> list[Polynomial]:
    # each generator of degree <= d, multiplied up to degree d by a power of a
    # variable it already involves, so its support is unchanged
    lifted = []
    for g in b:
        g_degree = g.degree()[0]
        if g_degree > degree:
            continue
        lead = g.leading_monomial
        j = next((i for i, e in enumerate(lead) if e), 0)
        lift = g * (g.ring.variable(j) ** (degree - g_degree))
        if lift not in lifted:
            lifted.append(lift)
    return lifted


def _combinations(pool: Sequence[Polynomial]) -> Iterator[Polynomial]:
    if len(pool) < 2:
        return
    for height in range(1, MAX_COEFFICIENT_HEIGHT + 1):
        values = range(-height, height + 1)
        for coefficients in itertools.product(values, repeat=len(pool)):
            nonzero = [c for c in coefficients if c]
            if len(nonzero) < 2 or nonzero[0] < 0 or max(abs(c) for c in nonzero) != height:
                continue
            combination = sum((p * c for p, c in zip(pool, coefficients) if c), pool[0].ring.zero())
            if combination:
                yield combination


def candidate_elements(b: Sequence[Polynomial], ring: RingDescriptor, order: str = "forward") -> Iterator[Polynomial]:
    """
    Homogeneous candidates from b, in a fixed order: the monomials of b by
    degree then lexicographically, then integer combinations (coefficient
    height at most 3) of the generators lifted to a common degree, by degree
    then height. "reverse" walks each group backwards.
    """
    if order not in SEARCH_ORDERS:
        raise ValueError(f"unknown search order {order!r}")
    b = [g for g in b if g]
    if not b:
        return
    degrees = sorted({g.degree()[0] for g in b})
    low, high = degrees[0], degrees[-1]
    seen = set()

    def arrange(items):
        return list(reversed(items)) if order == "reverse" else list(items)

    for degree in range(low, high + 1):
        for candidate in arrange(_monomials_in_ideal(b, ring, degree)):
            if candidate not in seen:
                seen.add(candidate)
                yield candidate
    for degree in range(low, high + 1):
        pool = arrange(_lifted_generators(b, degree))
        for candidate in _combinations(pool):
            if candidate not in seen:
                seen.add(candidate)
                yield candidate


def ext_support_index(a: Sequence[Polynomial], b: Sequence[Polynomial], module: ModulePresentation) -> Grade:
    """Least i <= nvars with Supp Ext^i(R/b, M) ⊄ V(a), else INFINITY."""
    ring = _standard_ring(module.ring)
    m_std = module.with_ring(ring)
    quotient = fpmod.ModulePresentation.cyclic(ring, _polys(b, ring))
    a_std = _polys(a, ring)
    for i, ext_module in enumerate(fpmod.ext_all(quotient, m_std, ring.nvars)):
        if not fpmod.support_in_V(ext_module, a_std):
            return i
    return INFINITY


def _extendable(a, b, module: ModulePresentation, previous) -> bool:
    # Supp Hom(R/b, M/(previous)M) ⊆ V(a)
    ring = module.ring
    if module.ngens == 0:
        return True
    relations = _sequence_relations(module, previous)
    if not any(b):
        return fpmod.support_in_V(fpmod.ModulePresentation(ring, module.gen_degrees, relations), a)
    widened = groebner.colon_ideal(relations, b, ring=ring, twists=module.gen_degrees)
    hom_module = fpmod.subquotient(ring, module.gen_degrees, widened, relations).module
    return fpmod.support_in_V(hom_module, a)


def find_fr_sequence(
        a: Sequence[Polynomial],
        b: Sequence[Polynomial],
        module: ModulePresentation,
        target_len: int,
        *,
        max_candidates: int = 10_000,
        order: str = "forward",
) -> SequenceSearch:
    """
    Greedy search for an a-filter regular M-sequence in b of length target_len.
    Before each step, extendability is decided exactly; a sequence that cannot
    be extended is returned with the Ext certificate. A search that runs out
    of candidates is marked exhausted, which is not a proof of impossibility.
    """
    if target_len < 0:
        raise ValueError("target_len must be non-negative")
    original = module.ring
    ring = _standard_ring(original)
    a_std, b_std, m_std = _polys(a, ring), _polys(b, ring), module.with_ring(ring)
    for g in b_std:
        if g and g.degree() is None:
            raise ValueError(f"generator {g} of b must be homogeneous")

    sequence: list[Polynomial] = []
    tried = 0
    while len(sequence) < target_len:
        if not _extendable(a_std, b_std, m_std, sequence):
            certificate = ext_support_index(a_std, b_std, m_std)
            if certificate != len(sequence):
                raise InconsistentCertificatesError(
                    f"sequence of length {len(sequence)} cannot be extended,"
                    f" but the Ext certificate gives {certificate}"
                )
            return SequenceSearch(_polys(sequence, original), target_len, certificate, candidates_tried=tried)

        step_tried = 0
        chosen = None
        if not any(b_std):
            # 0 is filter regular on M/(previous)M exactly when it is extendable
            sequence.append(ring.zero())
            continue
        for candidate in candidate_elements(b_std, ring, order):
            if step_tried >= max_candidates:
                break
            step_tried += 1
            if _step_witness(a_std, candidate, m_std, sequence).verdict:
                chosen = candidate
                break
        tried += step_tried
        logger.debug("step %d: %d candidates tried", len(sequence) + 1, step_tried)
        if chosen is None:
            logger.warning(
                "no filter regular element found at step %d after %d candidates; search exhausted",
                len(sequence) + 1, step_tried,
            )
            return SequenceSearch(_polys(sequence, original), target_len, exhausted=True, candidates_tried=tried)
        sequence.append(chosen)

    return SequenceSearch(_polys(sequence, original), target_len, candidates_tried=tried)


def _admissible(module: ModulePresentation) -> Optional[cechloc.AdmissibleModule]:
    try:
        return cechloc.AdmissibleModule.from_presentation(module)
    except NotAdmissibleError:
        return None


def fgrade(
        a: Sequence[Polynomial],
        b: Sequence[Polynomial],
        module: ModulePresentation,
        *,
        with_lc_check: bool = False,
        constructive: bool = True,
        max_candidates: int = 10_000,
        order: str = "forward",
) -> FGradeResult:
    """
    f-grad_a(b, M): INFINITY iff Supp M/bM ⊆ V(a), otherwise the least i with
    Supp Ext^i(R/b, M) ⊄ V(a). The constructive search and, on request, the
    local cohomology index are carried along as certificates.
    """
    original = module.ring
    ring = _standard_ring(original)
    a_std, b_std, m_std = _polys(a, ring), _polys(b, ring), module.with_ring(ring)

    infinite = fpmod.support_in_V(fpmod.quotient_by_ideal(m_std, b_std), a_std)
    ext_value = ext_support_index(a_std, b_std, m_std)
    if infinite != (ext_value == INFINITY):
        raise InconsistentCertificatesError(
            f"Supp M/bM ⊆ V(a) is {infinite}, but the Ext scan gives {ext_value}"
        )
    result = FGradeResult(value=ext_value, ext_certificate=ext_value)

    if constructive:
        target = ring.nvars + 1 if infinite else ext_value + 1
        search = find_fr_sequence(a, b, module, target, max_candidates=max_candidates, order=order)
        result.sequence = search.sequence
        if search.complete:
            result.constructive_value = INFINITY
        elif search.certificate is not None:
            result.constructive_value = len(search.sequence)
        else:
            result.notes.append(f"search exhausted after {search.candidates_tried} candidates")

    if with_lc_check:
        admissible = _admissible(module) if original.is_fine else None
        if admissible is None or not (is_monomial_ideal(a) and is_monomial_ideal(b)):
            logger.warning("local cohomology certificate skipped: needs fine grading, monomial ideals and admissible M")
            result.notes.append("local cohomology certificate skipped")
        else:
            result.lc_certificate = cechloc.local_cohomology_support_index(a, b, admissible)

    logger.debug("f-grad = %s (consistent: %s)", result.value, result.consistent)
    return result


def fdepth(b: Sequence[Polynomial], module: ModulePresentation, **kwargs) -> FGradeResult:
    """Filter depth: the filter grade with respect to the irrelevant ideal."""
    ring = module.ring
    result = fgrade(ring.gens(), b, module, **kwargs)
    quotient = fpmod.quotient_by_ideal(module, b)
    finite_length = fpmod.dim_module(quotient) <= 0
    if finite_length != (result.value == INFINITY):
        raise InconsistentCertificatesError(
            f"dim M/bM <= 0 is {finite_length}, but the filter depth is {result.value}"
        )
    return result


def fgrade_by_module(a: Sequence[Polynomial], n_module: ModulePresentation, module: ModulePresentation) -> ModuleGradeResult:
    """
    f-grad_a(Ann N, M) two ways: the least i with Supp Ext^i(N, M) ⊄ V(a), and
    fgrade(a, Ann N, M).
    """
    ring = _standard_ring(module.ring)
    a_std = _polys(a, ring)
    n_std, m_std = n_module.with_ring(ring), module.with_ring(ring)
    ext_value = INFINITY
    for i, ext_module in enumerate(fpmod.ext_all(n_std, m_std, ring.nvars)):
        if not fpmod.support_in_V(ext_module, a_std):
            ext_value = i
            break
    ann = fpmod.annihilator(n_std)
    via_fgrade = fgrade(a_std, ann, m_std, constructive=False).value
    return ModuleGradeResult(ext_value, via_fgrade)


def is_weak_sequence(xs: Sequence[Polynomial], module: ModulePresentation) -> bool:
    """Each x_i is a nonzerodivisor on M/(x_1..x_{i-1})M."""
    ring = _standard_ring(module.ring)
    xs_std, m_std = _polys(xs, ring), module.with_ring(ring)
    for i, x in enumerate(xs_std):
        _check_element(x)
        if m_std.ngens == 0:
            continue
        relations = _sequence_relations(m_std, xs_std[:i])
        widened = groebner.colon(relations, x, ring=ring, twists=m_std.gen_degrees)
        if not groebner.buchberger(relations, ring=ring, twists=m_std.gen_degrees).contains_all(widened):
            return False
    return True
