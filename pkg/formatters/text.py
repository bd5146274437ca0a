"""Человекочитаемые отчёты для команд CLI."""
from __future__ import annotations

from collections.abc import Iterable

from services.algebra import LemmaReport
from services.census import CensusReport, PreconditionUnmet
from services.comb_structure import AxiomReport
from services.correspondence import DerivedStructure, ExtensionStep
from services.defining_system import DefiningSystem, ValidationReport, serialize
from services.models import PartialMap, Vertex, sorted_indices
from services.quiver import BoundQuiver


def format_validation(ds: DefiningSystem | None, report: ValidationReport) -> str:
    if report.ok:
        return f"✅ Система корректна: {serialize(ds)}"
    lines = ["❌ Система нарушает ограничения:"]
    for v in report.violations:
        where = f"ветвь {v.branch}" if v.branch else "вся система"
        lines.append(f"  {v.constraint} ({where}): {v.message}")
    return "\n".join(lines)


def format_quiver(bq: BoundQuiver) -> str:
    lines = [f"Вершины ({len(bq.vertices)}):", "  " + " ".join(str(v) for v in bq.vertices)]
    lines.append(f"Стрелки ({len(bq.arrows)}):")
    for a in bq.arrows:
        lines.append(f"  {a.name}: {a.source} -> {a.target}")
    counts = bq.relation_counts()
    summary = ", ".join(f"{rule}: {counts[rule]}" for rule in sorted(counts))
    lines.append(f"Соотношения ({len(bq.relations)}; {summary}):")
    for relation in bq.relations:
        lines.append(f"  {relation}")
    return "\n".join(lines)


def _format_map(pmap: PartialMap) -> str:
    return ", ".join(f"{k}->{pmap[k]}" for k in sorted_indices(pmap)) or "∅"


def format_axioms(report: AxiomReport) -> str:
    parts = []
    for result in report.results:
        mark = {"pass": "✓", "fail": "✗", "skipped": "-"}[result.status]
        parts.append(f"{result.axiom}{mark}")
    return " ".join(parts)


def format_structure(derived: DerivedStructure, paths: bool = False) -> str:
    cs = derived.structure
    lines = [
        f"I ({len(cs.I)}): " + " ".join(str(v) for v in sorted_indices(cs.I)),
        f"φ: {_format_map(cs.phi)}",
        f"ρ: {_format_map(cs.rho)}",
        f"ψ: {_format_map(cs.psi)}",
        "l: " + ", ".join(f"{k}={cs.l[k]}" for k in sorted_indices(cs.l)),
        f"Аксиомы: {format_axioms(cs.axioms)}",
    ]
    if paths:
        nav = derived.navigator
        lines.append("Пути:")
        for v in sorted(nav.classes.x_all):
            lines.append(
                f"  {v}: ω={nav.omega(v).label}  μ={nav.mu(v).label}  ν={nav.nu(v).label}"
            )
    return "\n".join(lines)


def format_indices(title: str, indices: Iterable[Vertex]) -> str:
    values = sorted_indices(indices)
    return f"{title} ({len(values)}): " + (" ".join(str(v) for v in values) or "∅")


def format_extension(step: ExtensionStep, consistent: bool) -> str:
    mark = "✅" if consistent else "❌"
    return "\n".join(
        [
            f"Расширение по {step.index}: новый индекс {step.new_index}",
            serialize(step.system),
            f"{mark} Структура расширения совпадает с расширением структуры"
            if consistent
            else f"{mark} Структура расширения расходится с расширением структуры",
        ]
    )


def format_ancestry(start: DefiningSystem, chain: Iterable[ExtensionStep]) -> str:
    lines = [f"Фундаментальная система: {serialize(start)}"]
    for k, step in enumerate(chain, start=1):
        lines.append(f"  {k}. {step.index} -> {step.new_index}: {serialize(step.system)}")
    return "\n".join(lines)


def format_census(report: CensusReport | PreconditionUnmet) -> str:
    if isinstance(report, PreconditionUnmet):
        return f"⚠️ {serialize(report.system)}: {report.reason}"
    a, b = report.preprojective_type
    lines = [
        f"Система: {serialize(report.system)}",
        f"M = {report.M}, N = {report.N}, L = {report.L}",
        f"Препроективная компонента типа Ã_{{{a},{b}}}",
        f"Семейств корядовых труб: {report.coray_tube_families}",
        f"Компонент первого типа: {report.first_type}",
        f"Компонент второго типа: {report.second_type}",
    ]
    if report.preinjective_types:
        types = ", ".join(f"Ã_{{{a},{b}}}" for a, b in report.preinjective_types)
        lines.append(f"Преинъективные компоненты: {types}")
    else:
        lines.append("Преинъективных компонент нет")
    lines.append(f"ℤD∞: {'да' if report.has_ZD_infinity else 'нет'}")
    lines.append(f"ℤA∞∞: {'да' if report.has_ZA_infinity_infinity else 'нет'}")
    for cycle in report.sigma_cycles:
        lines.append(f"σ-цикл на ветви {cycle.branch}: " + " ".join(str(v) for v in cycle.vertices))
    return "\n".join(lines)


def format_lemma_report(report: LemmaReport) -> str:
    lines = [f"Система: {report.system} (поле {report.field})"]
    if report.skipped:
        lines.append(f"⚠️ Проверка пропущена: {report.skipped}")
        return "\n".join(lines)
    for lemma in sorted(report.counts):
        stats = report.counts[lemma]
        lines.append(f"  {lemma}: {stats['passed']}/{stats['checked']}")
    for m in report.mismatches:
        lines.append(f"❌ {m.lemma}: {m.witness}: ожидалось {m.expected}, получено {m.actual}")
    if report.ok:
        lines.append("✅ Расхождений нет")
    return "\n".join(lines)


def format_systems(systems: Iterable[DefiningSystem]) -> str:
    return "\n".join(serialize(ds) for ds in systems)
