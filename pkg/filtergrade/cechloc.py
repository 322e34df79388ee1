#
# cechloc.py
#
# Multigraded Čech machinery over fine-graded rings: admissible modules (sums of
# twisted cyclic monomial quotients), cohomology tables for H^i_a(N) and
# H^i_a(M, N), exact H^0 computations, and the verifiers comparing local
# cohomology along an ideal and along a filter regular sequence inside it.
#
# Every localization piece of an admissible module is 0- or 1-dimensional and
# is decided by a closed form, and pieces repeat outside a finite "chamber" of
# multidegrees, so tables are exact at every degree and evaluation over the
# chamber decides vanishing over all of Z^n.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import abc
import io
import itertools
import logging
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import littletable as lt

from filtergrade import filterreg, fpmod, groebner, linalg
from filtergrade.errors import NotAdmissibleError
from filtergrade.fpmod import FreeResolution, ModulePresentation
from filtergrade.groebner import FreeModuleElement
from filtergrade.ring_core import (
    INFINITY,
    Degree,
    DegreeWindow,
    Monomial,
    Polynomial,
    RingDescriptor,
    add_degrees,
    is_monomial_ideal,
    sub_degrees,
)

logger = logging.getLogger(__name__)

Support = frozenset


def _support(monomial: Monomial) -> Support:
    return Support(j for j, e in enumerate(monomial) if e)


def _face_sign(face: Sequence[int], k: int) -> int:
    return -1 if sum(1 for l in face if l < k) % 2 else 1


@dataclass(frozen=True)
class CyclicSummand:
    """R(-twist)/I for a monomial ideal I, given by its generator exponents."""
    twist: Degree
    generators: tuple[Monomial, ...]

    @cached_property
    def bound(self) -> Degree:
        n = len(self.twist)
        return tuple(max((g[j] for g in self.generators), default=0) for j in range(n))

    def survives(self, degree: Degree, support: Support) -> bool:
        """
        Whether the piece of degree `degree` of the localization at the
        variables in `support` is nonzero: the Laurent monomial x^(d - twist)
        must have nonnegative exponents off the support, and no generator may
        divide it there.
        """
        e = sub_degrees(degree, self.twist)
        off = [j for j in range(len(e)) if j not in support]
        if any(e[j] < 0 for j in off):
            return False
        return not any(all(g[j] <= e[j] for j in off) for g in self.generators)


@dataclass(frozen=True)
class AdmissibleModule:
    ring: RingDescriptor
    summands: tuple[CyclicSummand, ...]

    @classmethod
    def from_presentation(cls, module: ModulePresentation) -> AdmissibleModule:
        """Read a presentation whose relations each have a single monomial entry."""
        ring = module.ring
        if not ring.is_fine:
            raise NotAdmissibleError("tables need a fine-graded ring")
        gens: list[list[Monomial]] = [[] for _ in range(module.ngens)]
        for relation in module.relations:
            if len(relation.components) != 1:
                raise NotAdmissibleError(f"relation {relation} has more than one nonzero entry")
            (position, entry), = relation.components.items()
            if not entry.is_monomial():
                raise NotAdmissibleError(f"relation entry {entry} is not a monomial")
            gens[position].append(entry.leading_monomial)
        summands = tuple(
            CyclicSummand(twist, tuple(sorted(set(g))))
            for twist, g in zip(module.gen_degrees, gens)
        )
        return cls(ring, summands)

    def to_presentation(self) -> ModulePresentation:
        ring = self.ring
        twists = tuple(s.twist for s in self.summands)
        relations = [
            FreeModuleElement(ring, twists, {j: ring.monomial(g)})
            for j, s in enumerate(self.summands)
            for g in s.generators
        ]
        return ModulePresentation(ring, twists, relations)

    def is_zero(self) -> bool:
        return all(any(not any(g) for g in s.generators) for s in self.summands)

    def chamber(self) -> tuple[Degree, Degree]:
        """
        Bounds beyond which every localization piece repeats: in coordinate j,
        all degrees <= low_j behave alike, and all degrees >= high_j do.
        """
        n = self.ring.nvars
        if not self.summands:
            return (0,) * n, (0,) * n
        low = tuple(min(s.twist[j] for s in self.summands) - 1 for j in range(n))
        high = tuple(max(s.twist[j] + s.bound[j] for s in self.summands) for j in range(n))
        return low, high

    def __str__(self):
        parts = []
        for s in self.summands:
            ideal = ", ".join(self.ring.monomial_text(g) or "1" for g in s.generators)
            piece = f"cyclic ({ideal})"
            if any(s.twist):
                piece += f" twist {self.ring.format_degree(s.twist)}"
            parts.append(piece)
        return " ++ ".join(parts) if parts else "0"


class WindowedModule(abc.ABC):
    """
    A graded module known through its multigraded pieces and those of its
    localizations at sets of variables, with the maps between them. Bases
    are labelled; maps are given as sparse label-to-label coefficients.
    """
    def __init__(self, admissible: AdmissibleModule):
        self.admissible = admissible
        self.ring = admissible.ring

    @abc.abstractmethod
    def piece_alive(self, summand: int, degree: Degree, support: Support) -> bool:
        ...

    def basis(self, degree: Degree, support: Support = Support()) -> list[Hashable]:
        return [s for s in range(len(self.admissible.summands)) if self.piece_alive(s, degree, support)]

    def dim(self, degree: Degree, support: Support = Support()) -> int:
        return len(self.basis(degree, support))

    def transition(
            self,
            source_degree: Degree,
            target_degree: Degree,
            support: Support,
            target_support: Support,
    ) -> dict[Hashable, dict[Hashable, int]]:
        """
        Multiplication by x^(target - source), followed by localization from
        `support` to `target_support`. Each summand carries a monomial basis, so
        basis vectors map to basis vectors or to zero.
        """
        target = set(self.basis(target_degree, target_support))
        return {s: {s: 1} for s in self.basis(source_degree, support) if s in target}

    def chamber(self) -> tuple[Degree, Degree]:
        return self.admissible.chamber()


class AdmissibleWindowedModule(WindowedModule):
    """The admissible module itself."""
    def piece_alive(self, summand: int, degree: Degree, support: Support) -> bool:
        return self.admissible.summands[summand].survives(degree, support)


class CohomologyWindowedModule(WindowedModule):
    """
    H^n_(xs)(N) for an admissible N and monomials xs, n = len(xs). Its pieces
    (and those of its localizations) are top Čech cohomology: the top face
    must survive while every face of codimension one dies.
    """
    def __init__(self, admissible: AdmissibleModule, xs: Sequence[Monomial]):
        super().__init__(admissible)
        self.xs = tuple(xs)
        self.supports = [_support(x) for x in self.xs]
        n = len(self.xs)
        self._top = Support().union(*self.supports)
        self._facets = [
            Support().union(*(self.supports[k] for k in face))
            for face in itertools.combinations(range(n), n - 1)
        ] if n else []

    def piece_alive(self, summand: int, degree: Degree, support: Support) -> bool:
        piece = self.admissible.summands[summand]
        if not piece.survives(degree, support | self._top):
            return False
        return not any(piece.survives(degree, support | facet) for facet in self._facets)


@dataclass
class CohomologyTable:
    """
    Nonzero dimensions dim_k H^i(..)_d over a window, with the data they were
    computed from.
    """
    ring: RingDescriptor
    entries: dict[tuple[int, Degree], int]
    ideal: list[Polynomial]
    modules: list[str]
    window: DegreeWindow
    margin: Degree = ()
    label: str = "H"

    def dim(self, i: int, degree: Degree) -> int:
        return self.entries.get((i, tuple(degree)), 0)

    def row(self, i: int) -> dict[Degree, int]:
        return {d: v for (j, d), v in self.entries.items() if j == i}

    def indices(self) -> list[int]:
        return sorted({i for i, _ in self.entries})

    def max_index(self) -> int:
        return max((i for i, _ in self.entries), default=-1)

    def same_row(self, i: int, other: CohomologyTable, j: int = None) -> bool:
        return self.row(i) == other.row(i if j is None else j)

    def sorted_entries(self) -> list[tuple[int, Degree, int]]:
        return [(i, d, v) for (i, d), v in sorted(self.entries.items())]

    def as_table(self) -> lt.Table:
        table = lt.Table(self.label)
        n = self.ring.nvars
        table.insert_many(
            {"i": i, **{f"d{j + 1}": d[j] for j in range(n)}, "dim": v}
            for i, d, v in self.sorted_entries()
        )
        return table

    def fieldnames(self) -> list[str]:
        return ["i"] + [f"d{j + 1}" for j in range(self.ring.nvars)] + ["dim"]

    def as_tsv(self) -> str:
        out = io.StringIO()
        self.as_table().csv_export(out, fieldnames=self.fieldnames(), delimiter="\t")
        text = out.getvalue()
        if not self.entries:
            text = "\t".join(self.fieldnames()) + "\n"
        return text

    def metadata(self) -> dict:
        return {
            "ideal": [str(g) for g in self.ideal],
            "modules": list(self.modules),
            "window": str(self.window),
            "margin": list(self.margin),
        }


def _require_fine(ring: RingDescriptor) -> None:
    if not ring.is_fine:
        raise ValueError("cohomology tables need a fine-graded ring")


def _ideal_exponents(ideal: Sequence[Polynomial]) -> list[Monomial]:
    ideal = [g for g in ideal if g]
    if not is_monomial_ideal(ideal):
        raise ValueError("Čech tables need a monomial ideal")
    return [g.leading_monomial for g in ideal]


def _as_admissible(module) -> AdmissibleModule:
    if isinstance(module, AdmissibleModule):
        return module
    return AdmissibleModule.from_presentation(module)


def _as_presentation(module) -> ModulePresentation:
    if isinstance(module, AdmissibleModule):
        return module.to_presentation()
    return module


def _clip(degree: Degree, low: Degree, high: Degree) -> Degree:
    return tuple(min(max(d, lo), hi) for d, lo, hi in zip(degree, low, high))


def _cech_cohomology(summand: CyclicSummand, supports: Sequence[Support], degree: Degree, base: Support, field) -> list[int]:
    """Dimensions of H^p of the Čech complex on the given supports, for one summand."""
    s = len(supports)
    alive = []
    for p in range(s + 1):
        alive.append([
            face for face in itertools.combinations(range(s), p)
            if summand.survives(degree, base.union(*(supports[k] for k in face)))
        ])
    ranks = []
    for p in range(s):
        target = {face: r for r, face in enumerate(alive[p + 1])}
        rows = linalg.zeros(len(alive[p + 1]), len(alive[p]), field)
        for c, face in enumerate(alive[p]):
            for k in range(s):
                if k in face:
                    continue
                bigger = tuple(sorted(face + (k,)))
                if bigger in target:
                    rows[target[bigger]][c] = field(_face_sign(face, k))
        ranks.append(linalg.rank(rows, len(alive[p]), field))
    ranks.append(0)
    return [len(alive[p]) - ranks[p] - (ranks[p - 1] if p else 0) for p in range(s + 1)]


def _margin(a_exps: Sequence[Monomial], resolution: Optional[FreeResolution], n: int) -> Degree:
    reach = [max((g[j] for g in a_exps), default=0) * len(a_exps) for j in range(n)]
    twists = resolution.twists() if resolution is not None else []
    shift = [max((abs(c[j]) for c in twists), default=0) for j in range(n)]
    return tuple(r + t for r, t in zip(reach, shift))


def _evaluation_window(window: DegreeWindow, margin: Degree, margin_extra: int) -> DegreeWindow:
    grow = [m + margin_extra for m in margin]
    return window.enlarged(grow, grow)


def cech_table(
        a: Sequence[Polynomial],
        module,
        window: DegreeWindow,
        *,
        margin_extra: int = 0,
) -> CohomologyTable:
    """
    dim_k H^i_a(N)_d for every i and every d in the window, from the Čech
    complex on the monomial generators of a, one cyclic summand at a time.
    """
    admissible = _as_admissible(module)
    ring = admissible.ring
    _require_fine(ring)
    a_exps = _ideal_exponents(a)
    supports = [_support(g) for g in a_exps]
    field_ = ring.field
    margin = _margin(a_exps, None, ring.nvars)
    evaluation = _evaluation_window(window, margin, margin_extra)

    cache: dict[tuple[int, Degree], list[int]] = {}
    entries: dict[tuple[int, Degree], int] = {}
    for degree in evaluation:
        totals = [0] * (len(supports) + 1)
        for index, summand in enumerate(admissible.summands):
            e = sub_degrees(degree, summand.twist)
            key = (index, _clip(e, (-1,) * ring.nvars, summand.bound))
            if key not in cache:
                cache[key] = _cech_cohomology(summand, supports, add_degrees(key[1], summand.twist), Support(), field_)
            totals = [t + v for t, v in zip(totals, cache[key])]
        if degree in window:
            for i, v in enumerate(totals):
                if v:
                    entries[(i, tuple(degree))] = v

    logger.debug("Čech table: %d distinct complexes evaluated", len(cache))
    return CohomologyTable(ring, entries, list(a), [str(admissible)], window, margin)


class _TotalComplex:
    """
    Hom(F, Č(a) ⊗ W) in a single multidegree, for a free resolution F with
    fine-graded monomial differentials and a windowed module W.
    """
    def __init__(self, resolution: FreeResolution, supports: Sequence[Support], module: WindowedModule):
        self.resolution = resolution
        self.supports = list(supports)
        self.module = module
        self.faces = [
            list(itertools.combinations(range(len(supports)), q))
            for q in range(len(supports) + 1)
        ]
        self.top = max(len(resolution.degrees) - 1, 0) + len(supports)

    def _face_support(self, face) -> Support:
        return Support().union(*(self.supports[k] for k in face))

    def cells(self, degree: Degree) -> list[list[tuple]]:
        by_total = [[] for _ in range(self.top + 1)]
        for p, level in enumerate(self.resolution.degrees):
            for k, twist in enumerate(level):
                piece_degree = add_degrees(degree, twist)
                for q, faces in enumerate(self.faces):
                    for face in faces:
                        for label in self.module.basis(piece_degree, self._face_support(face)):
                            by_total[p + q].append((p, k, face, label))
        return by_total

    def dims(self, degree: Degree) -> list[int]:
        field_ = self.module.ring.field
        cells = self.cells(degree)
        ranks = []
        for i in range(self.top):
            ranks.append(self._rank(degree, cells[i], cells[i + 1], field_))
        ranks.append(0)
        return [len(cells[i]) - ranks[i] - (ranks[i - 1] if i else 0) for i in range(self.top + 1)]

    def _rank(self, degree: Degree, sources: list[tuple], targets: list[tuple], field_) -> int:
        if not sources or not targets:
            return 0
        row_of = {cell: r for r, cell in enumerate(targets)}
        rows = linalg.zeros(len(targets), len(sources), field_)
        levels = self.resolution.degrees
        for c, (p, k, face, label) in enumerate(sources):
            twist = levels[p][k]
            piece_degree = add_degrees(degree, twist)
            face_support = self._face_support(face)

            # Hom(d, -): e_k of F_p contributes d[k'][k] * w to f_k' of F_(p+1)
            if p + 1 < len(levels):
                for k2, column in enumerate(self.resolution.differentials[p]):
                    entry = column[k]
                    if not entry:
                        continue
                    target_degree = add_degrees(degree, levels[p + 1][k2])
                    images = self.module.transition(piece_degree, target_degree, face_support, face_support)
                    for image, coefficient in images.get(label, {}).items():
                        r = row_of.get((p + 1, k2, face, image))
                        if r is not None:
                            rows[r][c] += entry.leading_coefficient * field_(coefficient)

            # Čech differential, signed by the resolution index
            sign_p = -1 if p % 2 else 1
            for m in range(len(self.supports)):
                if m in face:
                    continue
                bigger = tuple(sorted(face + (m,)))
                images = self.module.transition(piece_degree, piece_degree, face_support, self._face_support(bigger))
                for image, coefficient in images.get(label, {}).items():
                    r = row_of.get((p, k, bigger, image))
                    if r is not None:
                        rows[r][c] += field_(sign_p * _face_sign(face, m) * coefficient)
        return linalg.rank(rows, len(sources), field_)


def _fine_resolution(module: ModulePresentation) -> FreeResolution:
    resolution = fpmod.free_resolution(module)
    for differential in resolution.differentials:
        for column in differential:
            if any(not p.is_monomial() for p in column.components.values()):
                raise ValueError("resolution differentials must be monomial in the fine grading")
    return resolution


def _resolution_box(module: WindowedModule, resolution: FreeResolution) -> tuple[Degree, Degree]:
    low, high = module.chamber()
    twists = resolution.twists() or [module.ring.zero_degree]
    n = module.ring.nvars
    box_low = tuple(low[j] - max(c[j] for c in twists) for j in range(n))
    box_high = tuple(high[j] - min(c[j] for c in twists) for j in range(n))
    return box_low, box_high


def _total_table(
        a: Sequence[Polynomial],
        resolution: FreeResolution,
        windowed: WindowedModule,
        window: DegreeWindow,
        margin_extra: int,
        modules: list[str],
        label: str,
) -> CohomologyTable:
    ring = windowed.ring
    a_exps = _ideal_exponents(a)
    complex_ = _TotalComplex(resolution, [_support(g) for g in a_exps], windowed)
    box_low, box_high = _resolution_box(windowed, resolution)
    margin = _margin(a_exps, resolution, ring.nvars)
    evaluation = _evaluation_window(window, margin, margin_extra)

    cache: dict[Degree, list[int]] = {}
    entries = {}
    for degree in evaluation:
        key = _clip(degree, box_low, box_high)
        if key not in cache:
            cache[key] = complex_.dims(key)
        if degree in window:
            for i, v in enumerate(cache[key]):
                if v:
                    entries[(i, tuple(degree))] = v
    logger.debug("%s table: %d distinct total complexes evaluated", label, len(cache))
    return CohomologyTable(ring, entries, list(a), modules, window, margin, label)


def gen_cech_table(
        a: Sequence[Polynomial],
        m_module: ModulePresentation,
        n_module,
        window: DegreeWindow,
        *,
        margin_extra: int = 0,
) -> CohomologyTable:
    """
    dim_k H^i_a(M, N)_d on the window, as cohomology of the total complex
    Hom(F, Č(a) ⊗ N) for the minimal free resolution F of M.
    """
    admissible = _as_admissible(n_module)
    _require_fine(m_module.ring)
    if m_module.ring != admissible.ring:
        raise ValueError(f"ring mismatch: {m_module.ring} vs {admissible.ring}")
    resolution = _fine_resolution(m_module)
    return _total_table(
        a, resolution, AdmissibleWindowedModule(admissible), window, margin_extra,
        [str(m_module), str(admissible)], "H(M,N)",
    )


def composite_table(
        a: Sequence[Polynomial],
        m_module: ModulePresentation,
        n_module,
        xs: Sequence[Polynomial],
        window: DegreeWindow,
        *,
        margin_extra: int = 0,
) -> CohomologyTable:
    """dim_k H^i_a(M, H^n_(xs)(N))_d on the window, n = len(xs)."""
    admissible = _as_admissible(n_module)
    _require_fine(m_module.ring)
    resolution = _fine_resolution(m_module)
    windowed = CohomologyWindowedModule(admissible, _ideal_exponents(xs))
    xs_text = ", ".join(str(x) for x in xs)
    return _total_table(
        a, resolution, windowed, window, margin_extra,
        [str(m_module), f"H^{len(xs)}_({xs_text})({admissible})"], "H(M,W)",
    )


def h0_exact(a: Sequence[Polynomial], m_module: ModulePresentation, n_module) -> ModulePresentation:
    """H^0_a(M, N) = Γ_a(Hom(M, N)), exactly."""
    return fpmod.gamma(a, fpmod.hom(m_module, _as_presentation(n_module)))[0]


def h0_consistent(a: Sequence[Polynomial], n_module, table: CohomologyTable) -> bool:
    """The i = 0 row of a Čech table agrees with the Hilbert table of Γ_a(N)."""
    torsion, _ = fpmod.gamma(a, _as_presentation(n_module))
    hilbert = fpmod.hilbert_function(torsion, table.window)
    return {d: v for d, v in hilbert.items() if v} == table.row(0)


def _chamber_window(windowed: WindowedModule, resolution: FreeResolution) -> DegreeWindow:
    low, high = _resolution_box(windowed, resolution)
    return DegreeWindow(low, high)


def cohomological_dimension(a: Sequence[Polynomial], m_module: ModulePresentation, n_module) -> int:
    """
    cd_a(M, N): the largest i with H^i_a(M, N) != 0, over all multidegrees;
    -1 when every H^i vanishes.
    """
    admissible = _as_admissible(n_module)
    if admissible.is_zero():
        return -1
    resolution = _fine_resolution(m_module)
    windowed = AdmissibleWindowedModule(admissible)
    table = _total_table(a, resolution, windowed, _chamber_window(windowed, resolution), 0, [], "cd")
    return table.max_index()


def local_cohomology_support_index(a: Sequence[Polynomial], b: Sequence[Polynomial], n_module):
    """
    Least i with Supp H^i_b(N) ⊄ V(a), or INFINITY. Supp X ⊆ V(a) iff X_g = 0
    for every generator g of a, and H^i_b(N)_g = H^i_b(N_g).
    """
    admissible = _as_admissible(n_module)
    ring = admissible.ring
    _require_fine(ring)
    b_supports = [_support(g) for g in _ideal_exponents(b)]
    a_supports = [_support(g) for g in _ideal_exponents(a)]
    if not a_supports:
        return INFINITY
    low, high = admissible.chamber()
    window = DegreeWindow(low, high)
    field_ = ring.field
    found = INFINITY
    for g_support in a_supports:
        for degree in window:
            for summand in admissible.summands:
                dims = _cech_cohomology(summand, b_supports, degree, g_support, field_)
                first = next((i for i, v in enumerate(dims) if v), None)
                if first is not None and first < found:
                    found = first
    return found


@dataclass
class VerificationReport:
    verdict: bool
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)
    tables: list[CohomologyTable] = field(default_factory=list)
    failure: Optional[str] = None


def _preconditions(
        a: Sequence[Polynomial],
        xs: Sequence[Polynomial],
        n_presentation: ModulePresentation,
) -> Optional[str]:
    ring = n_presentation.ring
    if not ring.is_fine:
        return "ring must be fine graded"
    if not is_monomial_ideal(a) or not is_monomial_ideal(xs):
        return "ideal and sequence must be monomial"
    a_gb = groebner.ideal_basis(a, ring)
    for i, x in enumerate(xs):
        if not a_gb.contains_polynomial(x):
            return f"step {i + 1}: {x} is not in the ideal"
    report = filterreg.is_fr_sequence(a, xs, n_presentation)
    for i, ok in enumerate(report.verdict_per_step):
        if not ok:
            return f"step {i + 1}: {xs[i]} is not filter regular"
    try:
        AdmissibleModule.from_presentation(n_presentation)
    except NotAdmissibleError as exc:
        return str(exc)
    return None


def _same_torsion(a, xs, hom_module: ModulePresentation) -> bool:
    ring, twists = hom_module.ring, hom_module.gen_degrees
    if hom_module.ngens == 0:
        return True
    relations = list(hom_module.relations)
    by_a = groebner.saturate(relations, a, ring=ring, twists=twists)
    by_xs = groebner.saturate(relations, xs, ring=ring, twists=twists)
    return groebner.same_submodule(by_a, by_xs, ring=ring, twists=twists)


def ns_verify(
        a: Sequence[Polynomial],
        xs: Sequence[Polynomial],
        m_module: ModulePresentation,
        n_module: ModulePresentation,
        window: DegreeWindow,
        *,
        margin_extra: int = 0,
) -> VerificationReport:
    """
    H^i_a(M, N) and H^i_(xs)(M, N) agree for i < len(xs): table equality on the
    window, plus equality of the two torsion submodules of Hom(M, N) at i = 0.
    """
    failure = _preconditions(a, xs, n_module)
    if failure:
        return VerificationReport(False, failure=failure)
    report = VerificationReport(True, details={"window": str(window)})
    if not xs:
        report.details["note"] = "empty sequence"
        return report

    hom_module = fpmod.hom(m_module, n_module)
    report.checks["H0 exact"] = _same_torsion(a, xs, hom_module)
    report.details["H0"] = str(h0_exact(a, m_module, n_module))

    along_a = gen_cech_table(a, m_module, n_module, window, margin_extra=margin_extra)
    along_xs = gen_cech_table(xs, m_module, n_module, window, margin_extra=margin_extra)
    report.tables = [along_a, along_xs]
    report.details["margin"] = str(list(along_a.margin))
    for i in range(len(xs)):
        report.checks[f"H{i} table"] = along_a.same_row(i, along_xs)
    report.verdict = all(report.checks.values())
    return report


def ns_compose_verify(
        a: Sequence[Polynomial],
        xs: Sequence[Polynomial],
        m_module: ModulePresentation,
        n_module: ModulePresentation,
        window: DegreeWindow,
        *,
        indices: Iterable[int] = None,
        margin_extra: int = 0,
) -> VerificationReport:
    """
    H^(i+n)_a(M, N) against H^i_a(M, H^n_(xs)(N)) for i in indices (default
    d and d+1, d = pd M), n = len(xs).
    """
    failure = _preconditions(a, xs, n_module)
    if failure:
        return VerificationReport(False, failure=failure)
    d = fpmod.projective_dimension(m_module)
    n = len(xs)
    indices = sorted(set(indices)) if indices is not None else [d, d + 1]

    direct = gen_cech_table(a, m_module, n_module, window, margin_extra=margin_extra)
    composite = composite_table(a, m_module, n_module, xs, window, margin_extra=margin_extra)
    report = VerificationReport(
        True,
        details={"window": str(window), "pd": str(d), "n": str(n), "margin": str(list(direct.margin))},
        tables=[direct, composite],
    )
    for i in indices:
        report.checks[f"H{i + n} vs H{i}"] = direct.row(i + n) == composite.row(i)
    report.verdict = all(report.checks.values())
    return report
