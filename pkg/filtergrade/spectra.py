#
# spectra.py
#
# Artinianness indices, cohomological-dimension tests, associated and minimal
# monomial primes, and attached primes of top generalized local cohomology,
# each computed along two routes that are checked against each other.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from filtergrade import cechloc, filterreg, fpmod, groebner
from filtergrade.cechloc import AdmissibleModule
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import INFINITY, Polynomial, RingDescriptor, is_monomial_ideal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonomialPrime:
    """The prime (x_i : i in S); S empty is the zero ideal."""
    ring: RingDescriptor = field(compare=False)
    variables: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))

    def sort_key(self):
        return len(self.variables), sorted(self.variables)

    @property
    def dimension(self) -> int:
        return self.ring.nvars - len(self.variables)

    def is_maximal(self) -> bool:
        return len(self.variables) == self.ring.nvars

    def generators(self) -> list[Polynomial]:
        return [self.ring.variable(j) for j in sorted(self.variables)]

    def contains_ideal(self, ideal: Sequence[Polynomial]) -> bool:
        """Monomial containment: every term of every generator involves a variable of S."""
        return all(
            any(monomial[j] for j in self.variables)
            for g in ideal
            for monomial in g.terms
        )

    def __str__(self):
        if not self.variables:
            return "(0)"
        return "(" + ", ".join(self.ring.variables[j] for j in sorted(self.variables)) + ")"

    __repr__ = __str__


def prime_from_text(ring: RingDescriptor, names: Iterable[str]) -> MonomialPrime:
    return MonomialPrime(ring, frozenset(ring.variables.index(name) for name in names))


def prime_from_ideal(ideal: Sequence[Polynomial], ring: RingDescriptor) -> MonomialPrime:
    """The monomial prime generated by the given variables; anything else is an error."""
    variables = set()
    for g in ideal:
        if not g:
            continue
        if not (g.is_monomial() and sum(g.leading_monomial) == 1):
            raise ValueError(f"{g} is not a variable: only monomial primes are supported")
        variables.add(g.leading_monomial.index(1))
    return MonomialPrime(ring, frozenset(variables))


def _sorted_primes(primes: Iterable[MonomialPrime]) -> list[MonomialPrime]:
    return sorted(set(primes), key=MonomialPrime.sort_key)


def _minimal_covers(supports: Sequence[frozenset], nvars: int) -> list[frozenset]:
    # minimal sets of variables meeting every support
    covers = []
    for size in range(nvars + 1):
        for subset in itertools.combinations(range(nvars), size):
            chosen = frozenset(subset)
            if any(c <= chosen for c in covers):
                continue
            if all(s & chosen for s in supports):
                covers.append(chosen)
    return covers


def minimal_primes_monomial(ideal: Sequence[Polynomial], ring: RingDescriptor) -> list[MonomialPrime]:
    """Minimal primes of a monomial ideal: minimal variable sets meeting every generator's support."""
    ideal = [g for g in ideal if g]
    if not is_monomial_ideal(ideal):
        raise ValueError("minimal primes need a monomial ideal")
    supports = [frozenset(j for j, e in enumerate(g.leading_monomial) if e) for g in ideal]
    if any(not s for s in supports):
        return []
    return _sorted_primes(MonomialPrime(ring, c) for c in _minimal_covers(supports, ring.nvars))


def _ass_cyclic(ring: RingDescriptor, generators: Sequence[tuple[int, ...]]) -> set[MonomialPrime]:
    if any(not any(g) for g in generators):
        return set()
    if not generators:
        return {MonomialPrime(ring, frozenset())}
    bound = [max(g[j] for g in generators) for j in range(ring.nvars)]
    ideal = [ring.monomial(g) for g in generators]
    found = set()
    for exponents in itertools.product(*(range(b + 1) for b in bound)):
        if any(all(g[j] <= exponents[j] for j in range(ring.nvars)) for g in generators):
            continue
        colon = groebner.ideal_colon(ideal, ring.monomial(exponents), ring)
        # (I : m) is a monomial ideal; it is prime iff generated by variables
        if all(p.is_monomial() and sum(p.leading_monomial) == 1 for p in colon):
            found.add(prime_from_ideal(colon, ring))
    return found


def ass_monomial(module) -> list[MonomialPrime]:
    """
    Associated primes of an admissible module, summand by summand: p_S is
    associated to R/I iff (I : m) = p_S for a monomial m outside I, and such m
    can be taken with exponents bounded by those of I's generators.
    """
    admissible = module if isinstance(module, AdmissibleModule) else AdmissibleModule.from_presentation(module)
    ring = admissible.ring
    found = set()
    for summand in admissible.summands:
        found |= _ass_cyclic(ring, summand.generators)
    return _sorted_primes(found)


class ArtinianIndex(NamedTuple):
    value: object
    fgrade_value: object

    @property
    def agree(self) -> bool:
        return self.value == self.fgrade_value


def _sum_ideals(*ideals: Sequence[Polynomial]) -> list[Polynomial]:
    return [g for ideal in ideals for g in ideal if g]


def artinian_index(
        a: Sequence[Polynomial],
        m_module: ModulePresentation,
        n_module: ModulePresentation,
) -> ArtinianIndex:
    """
    Least i <= nvars with dim Ext^i(M/aM, N) > 0, or INFINITY; cross-checked
    against fgrade(m, a + Ann M, N).
    """
    ring = m_module.ring
    quotient = fpmod.quotient_by_ideal(m_module, a)
    value = INFINITY
    for i, ext_module in enumerate(fpmod.ext_all(quotient, n_module, ring.nvars)):
        if fpmod.dim_module(ext_module) > 0:
            value = i
            break
    ideal = _sum_ideals(a, fpmod.annihilator(m_module))
    via_fgrade = filterreg.fgrade(ring.gens(), ideal, n_module, constructive=False).value
    return ArtinianIndex(value, via_fgrade)


class AllArtinian(NamedTuple):
    by_dimension: bool
    by_index: bool

    @property
    def agree(self) -> bool:
        return self.by_dimension == self.by_index


def all_artinian(a: Sequence[Polynomial], m_module: ModulePresentation, n_module: ModulePresentation) -> AllArtinian:
    """dim R/(a + Ann M + Ann N) <= 0, alongside artinian_index = INFINITY."""
    ring = m_module.ring
    ideal = _sum_ideals(a, fpmod.annihilator(m_module), fpmod.annihilator(n_module))
    by_dimension = groebner.dim_ideal(ideal, ring) <= 0
    by_index = artinian_index(a, m_module, n_module).value == INFINITY
    return AllArtinian(by_dimension, by_index)


class AllExtFinite(NamedTuple):
    by_dimension: bool
    by_ext: bool

    @property
    def agree(self) -> bool:
        return self.by_dimension == self.by_ext


def all_ext_finite_length(m_module: ModulePresentation, n_module: ModulePresentation) -> AllExtFinite:
    """Every Ext^i(M, N) has finite length iff dim R/(Ann M + Ann N) <= 0."""
    ring = m_module.ring
    ideal = _sum_ideals(fpmod.annihilator(m_module), fpmod.annihilator(n_module))
    by_dimension = groebner.dim_ideal(ideal, ring) <= 0
    by_ext = all(fpmod.dim_module(e) <= 0 for e in fpmod.ext_all(m_module, n_module, ring.nvars))
    return AllExtFinite(by_dimension, by_ext)


def finite_length_check(module: ModulePresentation) -> bool:
    """A nonzero module of dimension 0 has an annihilator primary to the irrelevant ideal."""
    if module.is_zero() or fpmod.dim_module(module) != 0:
        return True
    return fpmod.is_m_primary(fpmod.annihilator(module), module.ring)


def _localized_dimension(ideal: Sequence[Polynomial], prime: MonomialPrime) -> int:
    """dim (R/I)_p for a monomial I: max over minimal primes q ⊆ p of ht p - ht q, or -1."""
    ring = prime.ring
    best = -1
    for q in minimal_primes_monomial(ideal, ring):
        if q.variables <= prime.variables:
            best = max(best, len(prime.variables) - len(q.variables))
    return best


class LocalizedIndexAudit(NamedTuple):
    global_index: object
    by_primes: object
    primes: list[MonomialPrime]

    @property
    def agree(self) -> bool:
        return self.global_index == self.by_primes


def localized_index_audit(
        a: Sequence[Polynomial],
        m_module: ModulePresentation,
        n_module: ModulePresentation,
) -> LocalizedIndexAudit:
    """
    The Artinianness index as a minimum over monomial primes p of the least i
    with dim Ext^i(M/aM, N)_p > 0. Needs monomial Ext annihilators, which holds
    for fine-graded data.
    """
    ring = m_module.ring
    quotient = fpmod.quotient_by_ideal(m_module, a)
    exts = fpmod.ext_all(quotient, n_module, ring.nvars)
    annihilators = [fpmod.annihilator(e) for e in exts]
    for ann in annihilators:
        if not is_monomial_ideal(ann):
            raise ValueError("localized audit needs monomial Ext annihilators (use a fine-graded ring)")
    primes = {MonomialPrime(ring, frozenset(range(ring.nvars)))}
    for ann in annihilators:
        primes.update(minimal_primes_monomial(ann, ring))
    primes = _sorted_primes(primes)
    by_primes = INFINITY
    for p in primes:
        for i, ann in enumerate(annihilators):
            if i >= by_primes:
                break
            if _localized_dimension(ann, p) > 0:
                by_primes = i
                break
    return LocalizedIndexAudit(artinian_index(a, m_module, n_module).value, by_primes, primes)


class CdWitness(NamedTuple):
    prime: MonomialPrime
    dimension_matches: bool
    ideal_plus_prime_dim_zero: bool
    in_ext_support: bool

    @property
    def passes(self) -> bool:
        return self.dimension_matches and self.ideal_plus_prime_dim_zero and self.in_ext_support


def _top_ext_annihilator(m_module: ModulePresentation) -> tuple[int, list[Polynomial]]:
    ring = m_module.ring
    d = fpmod.projective_dimension(m_module)
    if d < 0:
        return d, [ring.one()]
    free = ModulePresentation.free(ring)
    return d, fpmod.annihilator(fpmod.ext(d, m_module, free))


def cd_witness(
        a: Sequence[Polynomial],
        prime: MonomialPrime,
        n: int,
        top_annihilator: Sequence[Polynomial],
) -> CdWitness:
    ring = prime.ring
    return CdWitness(
        prime,
        prime.dimension == n,
        groebner.dim_ideal(_sum_ideals(a, prime.generators()), ring) == 0,
        prime.contains_ideal(top_annihilator),
    )


def cd_test(a: Sequence[Polynomial], m_module: ModulePresentation, prime: MonomialPrime, n: int) -> bool:
    """
    cd_a(M, R/p) = n + pd M, decided as: dim R/p = n, dim R/(a + p) = 0, and
    p ∈ Supp Ext^d(M, R).
    """
    if not isinstance(prime, MonomialPrime):
        raise ValueError("cd_test needs a monomial prime")
    _, ann = _top_ext_annihilator(m_module)
    return cd_witness(a, prime, n, ann).passes


@dataclass
class AttReport:
    att: list[MonomialPrime]
    route: str
    witnesses: list[CdWitness] = field(default_factory=list)
    other_route: Optional[list[MonomialPrime]] = None
    checks: dict[str, bool] = field(default_factory=dict)
    top_index: int = 0

    @property
    def verdict(self) -> bool:
        agree = self.other_route is None or self.other_route == self.att
        return agree and all(self.checks.values())


def _dimension_of(module) -> int:
    presentation = module.to_presentation() if isinstance(module, AdmissibleModule) else module
    return fpmod.dim_module(presentation)


def att_top_local(a: Sequence[Polynomial], n_module) -> AttReport:
    """Att H^n_a(N), n = dim N: the associated primes p of N with cd_a(R/p) = n."""
    admissible = n_module if isinstance(n_module, AdmissibleModule) else AdmissibleModule.from_presentation(n_module)
    ring = admissible.ring
    n = _dimension_of(admissible)
    witnesses = [cd_witness(a, p, n, []) for p in ass_monomial(admissible)]
    att = [w.prime for w in witnesses if w.passes]
    report = AttReport(att, "associated primes with cd = dim N", witnesses, top_index=n)
    report.checks["no maximal prime when dim N > 0"] = n <= 0 or not any(p.is_maximal() for p in att)
    logger.debug("Att H^%d_a(N) over %s = %s", n, ring, att)
    return report


def att_top_gen(a: Sequence[Polynomial], m_module: ModulePresentation, n_module) -> AttReport:
    """
    Att H^(n+d)_a(M, N), d = pd M, n = dim N, along two routes: the associated
    primes p of N with cd_a(M, R/p) = n + d, and Supp Ext^d(M, R) ∩ Att H^n_a(N).
    Also checks inclusion in Supp M ∩ Att H^n_a(N), and that no maximal prime
    is reported when n > 0.
    """
    admissible = n_module if isinstance(n_module, AdmissibleModule) else AdmissibleModule.from_presentation(n_module)
    n = _dimension_of(admissible)
    d, top_ann = _top_ext_annihilator(m_module)
    witnesses = [cd_witness(a, p, n, top_ann) for p in ass_monomial(admissible)]
    att = [w.prime for w in witnesses if w.passes]

    local = att_top_local(a, admissible).att
    support_route = [p for p in local if p.contains_ideal(top_ann)]
    ann_m = fpmod.annihilator(m_module)
    inside_support = all(p in local and p.contains_ideal(ann_m) for p in att)

    report = AttReport(att, "associated primes with cd(M, R/p) = n + d", witnesses, support_route, top_index=n + d)
    report.checks["routes agree"] = support_route == att
    report.checks["inside Supp M ∩ Att H^n_a(N)"] = inside_support
    report.checks["no maximal prime when dim N > 0"] = n <= 0 or not any(p.is_maximal() for p in att)
    if m_module.ring.is_fine and not admissible.is_zero() and is_monomial_ideal([g for g in a if g]):
        _check_against_cech(report, a, m_module, admissible, n + d)
    return report


def _check_against_cech(report: AttReport, a, m_module: ModulePresentation, admissible: AdmissibleModule, top: int) -> None:
    # cd_a(M, R/p) from windowed Čech tables; cd_a(M, R/p) <= pd M + dim R/p
    try:
        prime_cds = {
            w.prime: cechloc.cohomological_dimension(a, m_module, ModulePresentation.cyclic(m_module.ring, w.prime.generators()))
            for w in report.witnesses
        }
        total_cd = cechloc.cohomological_dimension(a, m_module, admissible)
    except ValueError as exc:
        logger.debug("no Čech cross-check for att-top: %s", exc)
        return
    report.checks["Čech cd(M, R/p) = n + d matches witnesses"] = all(
        (prime_cds[w.prime] == top) == w.passes for w in report.witnesses
    )
    report.checks["Čech cd(M, N) = n + d iff Att is nonempty"] = (total_cd == top) == bool(report.att)


@dataclass
class CdAudit:
    values: dict[str, int] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(self.checks.values())


def _support_contained(first: ModulePresentation, second: ModulePresentation) -> bool:
    # Supp first ⊆ Supp second iff Ann second ⊆ √Ann first
    if first.is_zero():
        return True
    ann_first = fpmod.annihilator(first)
    return all(groebner.radical_member(g, ann_first) for g in fpmod.annihilator(second))


def cd_properties_audit(
        a: Sequence[Polynomial],
        m_module: ModulePresentation,
        modules: dict[str, ModulePresentation],
        split_pairs: Sequence[tuple[str, str]] = (),
        monotone_pairs: Sequence[tuple[str, str]] = (),
        cyclic_pairs: Sequence[tuple[Sequence[Polynomial], Sequence[Polynomial]]] = (),
) -> CdAudit:
    """
    Exact cd values checked for monotonicity in the support (cd(M, N) <= cd(M, L)
    when Supp N ⊆ Supp L), for max-additivity over split sequences, and for
    the cyclic sequences 0 -> I/J -> R/J -> R/I -> 0 of monomial ideals J ⊆ I
    with I principal.
    """
    audit = CdAudit()

    def cd_of(name: str, module) -> int:
        if name not in audit.values:
            audit.values[name] = cechloc.cohomological_dimension(a, m_module, module)
        return audit.values[name]

    for name, module in modules.items():
        cd_of(name, module)

    for first, second in split_pairs:
        total = fpmod.direct_sum(modules[first], modules[second])
        combined = cd_of(f"{first} ++ {second}", total)
        audit.checks[f"cd({first} ++ {second}) = max"] = combined == max(audit.values[first], audit.values[second])

    for first, second in monotone_pairs:
        if _support_contained(modules[first], modules[second]):
            audit.checks[f"cd({first}) <= cd({second})"] = audit.values[first] <= audit.values[second]

    ring = m_module.ring
    for small, large in cyclic_pairs:
        generators = [g for g in large if g]
        if len(generators) != 1:
            raise ValueError("cyclic pairs need a principal ideal")
        (generator,) = generators
        sub_name = f"({', '.join(map(str, large))})/({', '.join(map(str, small))})"
        quotient_small = ModulePresentation.cyclic(ring, small)
        quotient_large = ModulePresentation.cyclic(ring, large)
        # (m)/J ≅ R(-deg m)/(J : m)
        colon = groebner.ideal_colon(small, generator, ring)
        sub = ModulePresentation.cyclic(ring, colon, generator.degree())
        cd_sub = cd_of(sub_name, sub)
        cd_middle = cd_of(f"R/({', '.join(map(str, small))})", quotient_small)
        cd_quotient = cd_of(f"R/({', '.join(map(str, large))})", quotient_large)
        audit.checks[f"max rule on {sub_name}"] = cd_middle == max(cd_sub, cd_quotient)
    return audit
