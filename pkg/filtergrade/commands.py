#
# commands.py
#
# Session command dispatch: each command class resolves its key=value
# arguments against the session bindings, runs the computation, and returns
# an InvariantReport.
#
# Copyright 2024, Paul McGuire
#
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import ClassVar, Optional

import littletable as lt

from filtergrade import cechloc, filterreg, fixtures, fpmod, spectra
from filtergrade.errors import CommandError
from filtergrade.fpmod import ModulePresentation
from filtergrade.reporting import InvariantReport
from filtergrade.ring_core import DegreeWindow, Polynomial, RingDescriptor
from filtergrade.statements import (
    COMMAND_NAMES,
    CommandStatement,
    IdealStatement,
    ModuleStatement,
    SequenceStatement,
    Session,
)

logger = logging.getLogger(__name__)

_MISSING = object()


@dataclass
class RunConfig:
    seed: int = 0
    max_candidates: int = 10_000
    margin_extra: int = 0


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _texts(items) -> list[str]:
    return [str(item) for item in items]


def _hilbert_table(name: str, ring: RingDescriptor, values: dict) -> lt.Table:
    table = lt.Table(name)
    n = ring.degree_length
    table.insert_many(
        {**{f"d{j + 1}": degree[j] for j in range(n)}, "dim": dim}
        for degree, dim in sorted(values.items())
    )
    return table


@dataclass
class CommandContext:
    """Argument lookup for one command, against the session's bindings."""
    session: Session
    statement: CommandStatement
    config: RunConfig
    _modules: dict[str, ModulePresentation] = field(default_factory=dict)

    @property
    def ring(self) -> RingDescriptor:
        return self.session.ring

    def _argument(self, key: str, default):
        argument = self.statement.arguments.get(key)
        if argument is None:
            if default is _MISSING:
                raise ValueError(f"missing argument {key!r}")
            return None
        return argument

    def _bound(self, name: str):
        if name == self.session.ring_name:
            return None
        return self.session.bindings[name]

    def ideal(self, key: str, default=_MISSING) -> Optional[list[Polynomial]]:
        argument = self._argument(key, default)
        if argument is None:
            return default
        if argument.kind in ("ideal", "sequence"):
            return list(argument.value)
        if argument.kind == "name":
            bound = self._bound(argument.value)
            if isinstance(bound, IdealStatement):
                return list(bound.generators)
            if isinstance(bound, SequenceStatement):
                return list(bound.elements)
        raise ValueError(f"argument {key!r} must be an ideal")

    def sequence(self, key: str, default=_MISSING) -> Optional[list[Polynomial]]:
        argument = self._argument(key, default)
        if argument is None:
            return default
        if argument.kind == "sequence":
            return list(argument.value)
        if argument.kind == "name" and isinstance(self._bound(argument.value), SequenceStatement):
            return list(self._bound(argument.value).elements)
        raise ValueError(f"argument {key!r} must be a sequence")

    def module(self, key: str, default=_MISSING) -> Optional[ModulePresentation]:
        argument = self._argument(key, default)
        if argument is None:
            return default
        if argument.kind == "name":
            name = argument.value
            if name not in self._modules:
                bound = self._bound(name)
                if bound is None:
                    self._modules[name] = ModulePresentation.free(self.ring)
                elif isinstance(bound, ModuleStatement):
                    self._modules[name] = bound.presentation()
                else:
                    raise ValueError(f"argument {key!r} must be a module, {name!r} is not one")
            return self._modules[name]
        raise ValueError(f"argument {key!r} must be a module")

    def window(self, key: str = "window", default=_MISSING) -> Optional[DegreeWindow]:
        argument = self._argument(key, default)
        if argument is None:
            return default
        if argument.kind != "window":
            raise ValueError(f"argument {key!r} must be a window [lo..hi]")
        return argument.value

    def integer(self, key: str, default=_MISSING) -> Optional[int]:
        argument = self._argument(key, default)
        if argument is None:
            return default
        if argument.kind != "int":
            raise ValueError(f"argument {key!r} must be an integer")
        return argument.value

    def integers(self, key: str, default=_MISSING) -> Optional[list[int]]:
        """A sequence of integer constants, such as indices=[1, 2]."""
        values = self.sequence(key, default)
        if values is None or values is default:
            return values
        result = []
        for p in values:
            if not p.is_constant():
                raise ValueError(f"argument {key!r} must list integers, got {p}")
            result.append(int(str(p)))
        return result

    def flag(self, key: str, default: bool) -> bool:
        argument = self._argument(key, default)
        if argument is None:
            return default
        if argument.kind != "bool":
            raise ValueError(f"argument {key!r} must be true or false")
        return argument.value

    def word(self, key: str, default: str) -> str:
        argument = self._argument(key, default)
        return default if argument is None else argument.value


class SessionCommand:
    """
    Base class for session commands; subclasses set `name` and implement
    `execute`, returning (verdict, fields, tables).
    """
    name: ClassVar[str] = ""
    registry: ClassVar[dict[str, type[SessionCommand]]] = {}

    def __init_subclass__(cls):
        if cls.name not in COMMAND_NAMES:
            raise ValueError(f"command {cls.name!r} is not part of the session grammar")
        SessionCommand.registry[cls.name] = cls

    def __init__(self, context: CommandContext):
        self.context = context

    def execute(self) -> tuple[str, dict, dict]:
        raise NotImplementedError

    @classmethod
    def for_statement(cls, statement: CommandStatement) -> type[SessionCommand]:
        try:
            return cls.registry[statement.name]
        except KeyError:
            raise ValueError(f"no implementation for command {statement.name!r}") from None


def _grade_fields(result: filterreg.FGradeResult) -> dict:
    return {
        "value": result.value,
        "sequence": _texts(result.sequence) if result.sequence is not None else None,
        "constructive_value": result.constructive_value,
        "ext_certificate": result.ext_certificate,
        "lc_certificate": result.lc_certificate,
        "notes": list(result.notes),
    }


class FGradeCommand(SessionCommand):
    name = "fgrad"

    def execute(self):
        ctx = self.context
        result = filterreg.fgrade(
            ctx.ideal("a"), ctx.ideal("b"), ctx.module("M"),
            with_lc_check=ctx.flag("lc", True),
            constructive=ctx.flag("constructive", True),
            max_candidates=ctx.integer("max", ctx.config.max_candidates),
            order=ctx.word("order", "forward"),
        )
        return _verdict(result.consistent), _grade_fields(result), {}


class FDepthCommand(SessionCommand):
    name = "fdepth"

    def execute(self):
        ctx = self.context
        result = filterreg.fdepth(
            ctx.ideal("b"), ctx.module("M"),
            max_candidates=ctx.integer("max", ctx.config.max_candidates),
        )
        return _verdict(result.consistent), _grade_fields(result), {}


class FilterCheckCommand(SessionCommand):
    name = "filter-check"

    def execute(self):
        ctx = self.context
        a, xs, module = ctx.ideal("a"), ctx.sequence("xs"), ctx.module("M")
        powers = ctx.integers("powers", [2, 3])
        report = filterreg.is_fr_sequence(a, xs, module)
        audit = filterreg.equivalence_audit(a, xs, module, powers=[powers])
        fields = {
            "filter_regular": report.verdict,
            "verdict_per_step": report.verdict_per_step,
            "support_condition": audit.support_condition,
            "saturation_condition": audit.saturation_condition,
            "powered": {",".join(map(str, k)): v for k, v in audit.powered.items()},
            "annihilators": [_texts(w.annihilator) for w in report.witnesses],
        }
        return _verdict(audit.consistent), fields, {}


class FindSequenceCommand(SessionCommand):
    name = "find-seq"

    def execute(self):
        ctx = self.context
        search = filterreg.find_fr_sequence(
            ctx.ideal("a"), ctx.ideal("b"), ctx.module("M"), ctx.integer("len"),
            max_candidates=ctx.integer("max", ctx.config.max_candidates),
            order=ctx.word("order", "forward"),
        )
        fields = {
            "sequence": _texts(search.sequence),
            "target_len": search.target_len,
            "complete": search.complete,
            "certificate": search.certificate,
            "exhausted": search.exhausted,
            "candidates_tried": search.candidates_tried,
        }
        return "INFO", fields, {}


class WeakSequenceCommand(SessionCommand):
    name = "weak-seq"

    def execute(self):
        ctx = self.context
        xs, module = ctx.sequence("xs"), ctx.module("M")
        weak = filterreg.is_weak_sequence(xs, module)
        unit = filterreg.is_fr_sequence([ctx.ring.one()], xs, module).verdict
        return _verdict(weak == unit), {"weak_sequence": weak, "unit_filter_regular": unit}, {}


class FGradeByModuleCommand(SessionCommand):
    name = "fgrad-module"

    def execute(self):
        ctx = self.context
        result = filterreg.fgrade_by_module(ctx.ideal("a"), ctx.module("N"), ctx.module("M"))
        return _verdict(result.agree), {"ext_value": result.ext_value, "fgrade_value": result.fgrade_value}, {}


class ArtinianIndexCommand(SessionCommand):
    name = "artin-index"

    def execute(self):
        ctx = self.context
        result = spectra.artinian_index(ctx.ideal("a"), ctx.module("M"), ctx.module("N"))
        return _verdict(result.agree), {"value": result.value, "fgrade_value": result.fgrade_value}, {}


class ArtinianLocalCommand(SessionCommand):
    name = "artin-local"

    def execute(self):
        ctx = self.context
        audit = spectra.localized_index_audit(ctx.ideal("a"), ctx.module("M"), ctx.module("N"))
        fields = {"global_index": audit.global_index, "by_primes": audit.by_primes, "primes": _texts(audit.primes)}
        return _verdict(audit.agree), fields, {}


class AllArtinianCommand(SessionCommand):
    name = "all-artinian"

    def execute(self):
        ctx = self.context
        result = spectra.all_artinian(ctx.ideal("a"), ctx.module("M"), ctx.module("N"))
        return _verdict(result.agree), {"by_dimension": result.by_dimension, "by_index": result.by_index}, {}


class ExtFiniteCommand(SessionCommand):
    name = "ext-finite"

    def execute(self):
        ctx = self.context
        result = spectra.all_ext_finite_length(ctx.module("M"), ctx.module("N"))
        return _verdict(result.agree), {"by_dimension": result.by_dimension, "by_ext": result.by_ext}, {}


def _att_fields(report: spectra.AttReport) -> dict:
    fields = {
        "att": _texts(report.att),
        "top_index": report.top_index,
        "route": report.route,
    }
    if report.other_route is not None:
        fields["other_route"] = _texts(report.other_route)
    fields["checks"] = dict(report.checks)
    fields["witnesses"] = {
        str(w.prime): [w.dimension_matches, w.ideal_plus_prime_dim_zero, w.in_ext_support]
        for w in report.witnesses
    }
    return fields


class AttTopCommand(SessionCommand):
    name = "att-top"

    def execute(self):
        ctx = self.context
        report = spectra.att_top_gen(ctx.ideal("a"), ctx.module("M"), ctx.module("N"))
        return _verdict(report.verdict), _att_fields(report), {}


class AttTopLocalCommand(SessionCommand):
    name = "att-top-local"

    def execute(self):
        ctx = self.context
        report = spectra.att_top_local(ctx.ideal("a"), ctx.module("N"))
        return _verdict(report.verdict), _att_fields(report), {}


class CdTestCommand(SessionCommand):
    name = "cd-test"

    def execute(self):
        ctx = self.context
        prime = spectra.prime_from_ideal(ctx.ideal("prime"), ctx.ring)
        value = spectra.cd_test(ctx.ideal("a"), ctx.module("M"), prime, ctx.integer("n"))
        return "INFO", {"prime": str(prime), "value": value}, {}


class CdAuditCommand(SessionCommand):
    name = "cd-audit"

    def execute(self):
        ctx = self.context
        modules = {"N": ctx.module("N")}
        other = ctx.module("L", None)
        pairs = []
        if other is not None:
            modules["L"] = other
            pairs = [("N", "L")]
        cyclic_pairs = []
        small, large = ctx.ideal("small", None), ctx.ideal("large", None)
        if small is not None and large is not None:
            cyclic_pairs.append((small, large))
        audit = spectra.cd_properties_audit(
            ctx.ideal("a"), ctx.module("M"), modules,
            split_pairs=pairs,
            monotone_pairs=pairs + [(second, first) for first, second in pairs],
            cyclic_pairs=cyclic_pairs,
        )
        return _verdict(audit.verdict), {"cd": dict(audit.values), "checks": dict(audit.checks)}, {}


def _verification_fields(report: cechloc.VerificationReport) -> dict:
    fields = {"checks": dict(report.checks), **report.details}
    if report.failure:
        fields["failure"] = report.failure
    return fields


def _named_tables(names: Sequence[str], tables: Sequence[cechloc.CohomologyTable]) -> dict:
    return dict(zip(names, tables))


class NsVerifyCommand(SessionCommand):
    name = "ns-verify"

    def execute(self):
        ctx = self.context
        report = cechloc.ns_verify(
            ctx.ideal("a"), ctx.sequence("xs"), ctx.module("M"), ctx.module("N"), ctx.window(),
            margin_extra=ctx.config.margin_extra,
        )
        return _verdict(report.verdict), _verification_fields(report), _named_tables(("along a", "along xs"), report.tables)


class NsComposeVerifyCommand(SessionCommand):
    name = "ns-compose-verify"

    def execute(self):
        ctx = self.context
        report = cechloc.ns_compose_verify(
            ctx.ideal("a"), ctx.sequence("xs"), ctx.module("M"), ctx.module("N"), ctx.window(),
            indices=ctx.integers("indices", None),
            margin_extra=ctx.config.margin_extra,
        )
        return _verdict(report.verdict), _verification_fields(report), _named_tables(("direct", "composite"), report.tables)


class CechTableCommand(SessionCommand):
    name = "cech-table"

    def execute(self):
        ctx = self.context
        a, n_module, window = ctx.ideal("a"), ctx.module("N"), ctx.window()
        m_module = ctx.module("M", None)
        margin_extra = ctx.config.margin_extra
        if m_module is None:
            table = cechloc.cech_table(a, n_module, window, margin_extra=margin_extra)
            consistent = cechloc.h0_consistent(a, n_module, table)
            fields = {**table.metadata(), "h0_consistent": consistent, "max_index": table.max_index()}
            return _verdict(consistent), fields, {table.label: table}
        table = cechloc.gen_cech_table(a, m_module, n_module, window, margin_extra=margin_extra)
        fields = {**table.metadata(), "max_index": table.max_index()}
        return "INFO", fields, {table.label: table}


class ExtCommand(SessionCommand):
    name = "ext"

    def execute(self):
        ctx = self.context
        i = ctx.integer("i")
        module, _ = fpmod.minimize_presentation(fpmod.ext(i, ctx.module("M"), ctx.module("N")))
        fields = {"i": i, "module": str(module), "dim": fpmod.dim_module(module), "annihilator": _texts(fpmod.annihilator(module))}
        tables = {}
        window = ctx.window("window", None)
        if window is not None:
            tables["hilbert"] = _hilbert_table("hilbert", ctx.ring, fpmod.hilbert_function(module, window))
        return "INFO", fields, tables


class HilbertCommand(SessionCommand):
    name = "hilbert"

    def execute(self):
        ctx = self.context
        module = ctx.module("M")
        values = fpmod.hilbert_function(module, ctx.window())
        return "INFO", {"module": str(module)}, {"hilbert": _hilbert_table("hilbert", ctx.ring, values)}


class GammaCommand(SessionCommand):
    name = "gamma"

    def execute(self):
        ctx = self.context
        torsion, _ = fpmod.gamma(ctx.ideal("a"), ctx.module("M"))
        torsion, _ = fpmod.minimize_presentation(torsion)
        fields = {"module": str(torsion), "zero": torsion.is_zero()}
        tables = {}
        window = ctx.window("window", None)
        if window is not None:
            tables["hilbert"] = _hilbert_table("hilbert", ctx.ring, fpmod.hilbert_function(torsion, window))
        return "INFO", fields, tables


class ResolveCommand(SessionCommand):
    name = "resolve"

    def execute(self):
        ctx = self.context
        resolution = fpmod.free_resolution(ctx.module("M"))
        fields = {
            "ranks": resolution.ranks,
            "projective_dimension": resolution.length,
            "twists": [[ctx.ring.format_degree(d) for d in level] for level in resolution.degrees],
        }
        exact = fpmod.resolution_is_exact(resolution)
        fields["exact"] = exact
        return _verdict(exact), fields, {}


class TripleCheckCommand(SessionCommand):
    name = "triple-check"

    def execute(self):
        ctx = self.context
        count = ctx.integer("count", 50)
        nvars = ctx.integer("nvars", 3)
        seed = ctx.integer("seed", ctx.config.seed)
        disagreements = []
        for fixture in fixtures.random_fixtures(seed, count, nvars):
            check = fixtures.check_fixture(fixture, max_candidates=ctx.config.max_candidates)
            if not check.agree:
                disagreements.append(str(fixture))
        fields = {"seed": seed, "fixtures": count, "agreeing": count - len(disagreements), "disagreements": disagreements}
        return _verdict(not disagreements), fields, {}


def run(session: Session, config: RunConfig = None) -> list[InvariantReport]:
    """
    Execute the session's commands in order. A failing command raises
    CommandError carrying its 1-based index.
    """
    config = config or RunConfig()
    reports = []
    for index, statement in enumerate(session.commands, start=1):
        context = CommandContext(session, statement, config)
        try:
            command_class = SessionCommand.for_statement(statement)
            verdict, fields, tables = command_class(context).execute()
        except (ValueError, ArithmeticError) as exc:
            raise CommandError(index, statement.name, exc) from exc
        report = InvariantReport(index, statement.name, verdict, fields, tables)
        logger.info("command %d %s: %s", index, statement.name, verdict)
        reports.append(report)
    return reports
