#
# fixtures.py
#
# Seeded random monomial fixtures, and the triple-agreement check run over
# them: constructive sequence length, Ext-support index and (for small
# admissible fixtures) the local cohomology support index.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import logging
import random
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import NamedTuple

from sympy.polys.domains import QQ

from filtergrade import filterreg
from filtergrade.fpmod import ModulePresentation
from filtergrade.ring_core import Monomial, Polynomial, RingDescriptor

logger = logging.getLogger(__name__)

VARIABLE_NAMES = ("x", "y", "z")
MAX_GENERATOR_DEGREE = 4
SMALL_COEFFICIENTS = (-3, -2, -1, 1, 2, 3)
# the local cohomology route is only run on fixtures this small
LC_MAX_VARS = 2


class MonomialFixture(NamedTuple):
    ring: RingDescriptor
    a: list[Polynomial]
    b: list[Polynomial]
    module: ModulePresentation

    def __str__(self):
        def ideal(gens):
            return "(" + ", ".join(str(g) for g in gens) + ")"
        return f"{self.ring} a={ideal(self.a)} b={ideal(self.b)} M={self.module}"


def random_partition(rng: random.Random, n: int, k: int) -> Monomial:
    """Use bars and stars to get a random partition of integer n into k pieces."""
    bars = sorted(rng.sample(range(n + k - 1), k - 1))
    counts = []
    previous = -1
    for bar in bars:
        counts.append(bar - previous - 1)
        previous = bar
    counts.append(n + k - 1 - previous - 1)
    return tuple(counts)


def random_monomial_ideal(rng: random.Random, ring: RingDescriptor, size: int, max_degree: int) -> list[Polynomial]:
    """Return `size` distinct monomials of degree 1..max_degree, as ideal generators."""
    found = set()
    while len(found) < size:
        degree = rng.randint(1, max_degree)
        found.add(random_partition(rng, degree, ring.nvars))
    return [ring.monomial(e) for e in sorted(found, reverse=True)]


def random_polynomial(rng: random.Random, ring: RingDescriptor, max_degree: int, max_terms: int = 3) -> Polynomial:
    """Up to `max_terms` terms of degree 0..max_degree, with small nonzero integer coefficients."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exponents = random_partition(rng, rng.randint(0, max_degree), ring.nvars)
        terms[exponents] = ring.field(rng.choice(SMALL_COEFFICIENTS))
    return Polynomial(ring, terms)


def random_fixtures(seed: int, count: int, max_vars: int = 3) -> Iterator[MonomialFixture]:
    """
    `count` fixtures over fine-graded Q[x..], at most max_vars variables and
    generator degree at most MAX_GENERATOR_DEGREE; M is a cyclic monomial
    quotient R/I (possibly R itself).
    """
    if not 1 <= max_vars <= len(VARIABLE_NAMES):
        raise ValueError(f"max_vars must be between 1 and {len(VARIABLE_NAMES)}, got {max_vars}")
    rng = random.Random(seed)
    for _ in range(count):
        nvars = rng.randint(1, max_vars)
        ring = RingDescriptor(VARIABLE_NAMES[:nvars], QQ, "fine")
        a = random_monomial_ideal(rng, ring, rng.randint(1, 2), 3)
        b = random_monomial_ideal(rng, ring, rng.randint(1, 2), 3)
        relations = random_monomial_ideal(rng, ring, rng.randint(0, 2), MAX_GENERATOR_DEGREE)
        yield MonomialFixture(ring, a, b, ModulePresentation.cyclic(ring, relations))


@dataclass
class TripleCheck:
    fixture: MonomialFixture
    ext_value: object = None
    constructive: dict[str, object] = field(default_factory=dict)
    lc_value: object = None
    audit_consistent: bool = True

    @property
    def agree(self) -> bool:
        values = list(self.constructive.values())
        if self.lc_value is not None:
            values.append(self.lc_value)
        return all(v == self.ext_value for v in values) and self.audit_consistent


def check_fixture(fixture: MonomialFixture, *, max_candidates: int = 10_000) -> TripleCheck:
    """
    Compare the constructive length (under every search order) with the Ext
    support index and, on small fixtures, the local cohomology index; audit
    the equivalent forms of filter regularity on the sequence found.
    """
    check = TripleCheck(fixture)
    a, b, module = fixture.a, fixture.b, fixture.module
    for order in filterreg.SEARCH_ORDERS:
        result = filterreg.fgrade(
            a, b, module,
            with_lc_check=(order == "forward" and fixture.ring.nvars <= LC_MAX_VARS),
            max_candidates=max_candidates,
            order=order,
        )
        check.ext_value = result.ext_certificate
        check.constructive[order] = result.constructive_value
        if order == "forward":
            check.lc_value = result.lc_certificate
            if result.sequence:
                audit = filterreg.equivalence_audit(a, result.sequence, module, powers=((2, 3), (3, 1, 2)))
                check.audit_consistent = audit.consistent
    if not check.agree:
        logger.warning("triple check disagrees on %s: %s", fixture, check)
    return check
