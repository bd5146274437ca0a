"""Обработчики команд."""
from __future__ import annotations

import argparse
import json
from collections.abc import Awaitable, Callable
from dataclasses import dataclass
from pathlib import Path as FilePath

from config import Config
from formatters import text
from handlers.checks import run_checks
from services import algebra, census, comb_structure, correspondence, quiver
from services.defining_system import (
    DefiningSystem,
    EnumerationBounds,
    enumerate_systems,
    parse,
    system_to_dict,
    validate,
)
from services.errors import InvalidSystemError


@dataclass(frozen=True)
class Reply:
    """Ответ команды: текст для stdout и код завершения."""

    text: str
    code: int = 0


Handler = Callable[[argparse.Namespace, Config], Awaitable[Reply]]
HANDLERS: dict[str, Handler] = {}


def command(name: str) -> Callable[[Handler], Handler]:
    def register(func: Handler) -> Handler:
        HANDLERS[name] = func
        return func

    return register


def dump(data: object) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def load_system(path: str) -> DefiningSystem:
    return parse(FilePath(path).read_text(encoding="utf-8"))


@command("validate")
async def cmd_validate(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды validate."""
    try:
        ds = load_system(args.file)
    except InvalidSystemError as e:
        if args.json:
            return Reply(dump(e.report.to_dict()), 1)
        return Reply(text.format_validation(None, e.report), 1)
    if args.json:
        return Reply(dump({"ok": True, "violations": [], "system": system_to_dict(ds)}))
    return Reply(text.format_validation(ds, validate(ds)))


@command("quiver")
async def cmd_quiver(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды quiver."""
    bq = quiver.build_quiver(load_system(args.file))
    fmt = "json" if args.json else args.format
    if fmt == "dot":
        return Reply(quiver.export_dot(bq))
    if fmt == "json":
        return Reply(quiver.export_json(bq))
    return Reply(text.format_quiver(bq))


@command("structure")
async def cmd_structure(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды structure."""
    derived = correspondence.derive_structure(load_system(args.file))
    code = 0 if derived.structure.axioms.ok else 1
    if not args.json:
        return Reply(text.format_structure(derived, paths=args.paths), code)

    data = derived.structure.to_dict()
    data["axioms"] = {
        r.axiom: {"status": r.status, "witnesses": [str(w) for w in r.witnesses]}
        for r in derived.structure.axioms.results
    }
    if args.paths:
        nav = derived.navigator
        data["paths"] = {
            str(v): {
                "omega": nav.omega(v).label,
                "mu": nav.mu(v).label,
                "nu": nav.nu(v).label,
            }
            for v in sorted(nav.classes.x_all)
        }
    return Reply(dump(data), code)


@command("admissible")
async def cmd_admissible(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды admissible."""
    ds = load_system(args.file)
    by_lemma = correspondence.admissible_lemma(ds)
    by_axioms = comb_structure.admissible_set(correspondence.derive_structure(ds).structure)
    consistent = by_lemma == by_axioms
    code = 0 if consistent else 1
    if args.json:
        return Reply(
            dump(
                {
                    "admissible": [str(v) for v in sorted(by_lemma)],
                    "by_axioms": [str(v) for v in sorted(by_axioms)],
                    "consistent": consistent,
                }
            ),
            code,
        )
    lines = [text.format_indices("Допустимые индексы", by_lemma)]
    if not consistent:
        lines.append("❌ " + text.format_indices("По аксиомам A1-A5", by_axioms))
    return Reply("\n".join(lines), code)


@command("extend")
async def cmd_extend(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды extend."""
    ds = load_system(args.file)
    step = correspondence.extend_ds(ds, args.index)
    check = correspondence.cross_check_extension(ds, args.index)
    code = 0 if check.ok else 1
    if args.json:
        data = step.to_dict()
        data["consistent"] = check.ok
        data["diff"] = list(check.diff)
        return Reply(dump(data), code)
    return Reply(text.format_extension(step, check.ok), code)


@command("ancestry")
async def cmd_ancestry(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды ancestry."""
    ds = load_system(args.file)
    chain = correspondence.ancestry(ds)
    start = correspondence.fundamental_of(ds)
    if args.json:
        return Reply(
            dump({"fundamental": system_to_dict(start), "chain": [s.to_dict() for s in chain]})
        )
    return Reply(text.format_ancestry(start, chain))


@command("census")
async def cmd_census(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды census."""
    report = census.census(load_system(args.file))
    if args.json:
        return Reply(dump(report.to_dict()))
    return Reply(text.format_census(report))


@command("verify")
async def cmd_verify(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды verify."""
    ds = load_system(args.file)
    budget = args.budget if args.budget is not None else config.verify_budget
    report = algebra.verify_lemmas(ds, lemmas=args.lemmas, budget=budget)
    code = 0 if report.ok else 1
    if args.json:
        return Reply(dump(report.to_dict()), code)
    return Reply(text.format_lemma_report(report), code)


@command("enumerate")
async def cmd_enumerate(args: argparse.Namespace, config: Config) -> Reply:
    """Обработчик команды enumerate."""
    bounds = EnumerationBounds(args.max_n, args.max_p, args.max_q, args.max_t)
    systems = list(enumerate_systems(bounds))
    if not args.check_all:
        if args.json:
            return Reply(dump({"count": len(systems), "systems": [system_to_dict(s) for s in systems]}))
        return Reply(text.format_systems(systems))

    report = await run_checks(
        systems,
        workers=args.workers if args.workers is not None else config.workers,
        verify_budget=args.budget if args.budget is not None else config.verify_budget,
        path_budget=config.path_budget,
    )
    code = 0 if report.ok else 1
    if args.json:
        return Reply(dump(report.to_dict()), code)
    lines = [f"Проверено систем: {report.systems}"]
    for check_id in sorted(report.skipped):
        lines.append(f"⚠️ {check_id}: пропущено {report.skipped[check_id]} (бюджет)")
    for failure in report.failures:
        lines.append(f"❌ {failure.system} [{failure.check}] {failure.witness}")
    if report.ok:
        lines.append("✅ Расхождений нет")
    return Reply("\n".join(lines), code)
