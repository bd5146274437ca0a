"""Пакетная проверка всех перечисленных систем (enumerate --check-all)."""
from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from services import algebra, census, correspondence, quiver
from services.comb_structure import admissible_set
from services.defining_system import DefiningSystem, serialize
from services.errors import BudgetExceeded, TwoRayError
from services.models import sorted_indices

logger = logging.getLogger(__name__)

CHECK_IDS = (
    "quiver",
    "axioms",
    "closed_forms",
    "lemma1",
    "lemma2",
    "ancestry",
    "census",
    "oracle",
    "lemmas",
)


@dataclass(frozen=True, order=True)
class CheckFailure:
    system: str
    check: str
    witness: str

    def to_dict(self) -> dict:
        return {"system": self.system, "check": self.check, "witness": self.witness}


@dataclass
class SystemResult:
    order: int
    system: str
    failures: list[CheckFailure] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)


@dataclass
class CheckAllReport:
    systems: int = 0
    failures: list[CheckFailure] = field(default_factory=list)
    skipped: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "systems": self.systems,
            "ok": self.ok,
            "skipped": {k: self.skipped[k] for k in sorted(self.skipped)},
            "failures": [f.to_dict() for f in self.failures],
        }


def _check_quiver(ds: DefiningSystem) -> list[str]:
    bq = quiver.build_quiver(ds)
    problems = []
    n_vertices = sum(ds.top(i) + 1 + ds.q_at(i) - 1 + len(ds.S_at(i)) for i in ds.branches())
    n_arrows = sum(
        ds.top(i) + ds.q_at(i) + len(ds.S_at(i)) + len(ds.T_at(i)) for i in ds.branches()
    )
    if len(bq.vertices) != n_vertices:
        problems.append(f"вершин {len(bq.vertices)}, ожидалось {n_vertices}")
    if len(bq.arrows) != n_arrows:
        problems.append(f"стрелок {len(bq.arrows)}, ожидалось {n_arrows}")
    expected = {
        "R1": sum(len(s) for s in ds.S),
        "R2": sum(1 for t in ds.T if t),
        "R3": sum(max(len(t) - 1, 0) for t in ds.T),
        "R4": sum(len(t) for t in ds.T),
    }
    if bq.relation_counts() != expected:
        problems.append(f"соотношения {bq.relation_counts()}, ожидалось {expected}")
    if not quiver.acyclicity_check(bq):
        problems.append("колчан содержит цикл")
    return problems


def _check_axioms(ds: DefiningSystem) -> list[str]:
    report = correspondence.derive_structure(ds).structure.axioms
    return [f"{r.axiom}: {[str(w) for w in r.witnesses]}" for r in report.failed()]


def _check_closed_forms(ds: DefiningSystem) -> list[str]:
    return [f"{check}: {witness}" for check, witness in correspondence.closed_form_mismatches(ds)]


def _check_lemma1(ds: DefiningSystem) -> list[str]:
    by_lemma = correspondence.admissible_lemma(ds)
    by_axioms = admissible_set(correspondence.derive_structure(ds).structure)
    if by_lemma == by_axioms:
        return []
    return [
        f"только по описанию: {[str(v) for v in sorted_indices(by_lemma - by_axioms)]}, "
        f"только по A1-A5: {[str(v) for v in sorted_indices(by_axioms - by_lemma)]}"
    ]


def _check_lemma2(ds: DefiningSystem) -> list[str]:
    problems = []
    for y in sorted_indices(correspondence.admissible_lemma(ds)):
        result = correspondence.cross_check_extension(ds, y)
        problems.extend(f"y={y}: {line}" for line in result.diff)
    return problems


def _check_ancestry(ds: DefiningSystem) -> list[str]:
    chain = correspondence.ancestry(ds)
    expected = sum(len(s) + len(t) for s, t in zip(ds.S, ds.T))
    problems = []
    if len(chain) != expected:
        problems.append(f"длина цепочки {len(chain)}, ожидалось {expected}")
    replayed = correspondence.replay(correspondence.fundamental_of(ds), chain)
    if serialize(replayed) != serialize(ds):
        problems.append(f"повтор цепочки дал {serialize(replayed)}")
    return problems


def _check_census(ds: DefiningSystem) -> list[str]:
    # перекрёстные проверки M, N, L и σ-циклов выполняются внутри census()
    census.census(ds)
    return []


class _Skipped(Exception):
    pass


def _check_oracle(ds: DefiningSystem, path_budget: int) -> list[str]:
    try:
        oracle = algebra.algebra_dim_oracle(ds, max_paths=path_budget)
    except BudgetExceeded as e:
        raise _Skipped(str(e)) from e
    dimension = algebra.algebra_basis(ds).dimension
    if oracle != dimension:
        return [f"базис {dimension}, оракул {oracle}"]
    return []


def _check_lemmas(ds: DefiningSystem, verify_budget: int) -> list[str]:
    report = algebra.verify_lemmas(ds, budget=verify_budget)
    if report.skipped:
        raise _Skipped(report.skipped)
    return [
        f"{m.lemma}: {m.witness}: ожидалось {m.expected}, получено {m.actual}"
        for m in report.mismatches
    ]


def check_system(
    order: int, ds: DefiningSystem, verify_budget: int, path_budget: int
) -> SystemResult:
    """Прогоняет все проверки для одной системы; исключения превращаются в свидетелей."""
    canonical = serialize(ds)
    result = SystemResult(order, canonical)
    checks: dict[str, Callable[[], list[str]]] = {
        "quiver": lambda: _check_quiver(ds),
        "axioms": lambda: _check_axioms(ds),
        "closed_forms": lambda: _check_closed_forms(ds),
        "lemma1": lambda: _check_lemma1(ds),
        "lemma2": lambda: _check_lemma2(ds),
        "ancestry": lambda: _check_ancestry(ds),
        "census": lambda: _check_census(ds),
        "oracle": lambda: _check_oracle(ds, path_budget),
        "lemmas": lambda: _check_lemmas(ds, verify_budget),
    }
    for check_id in CHECK_IDS:
        try:
            problems = checks[check_id]()
        except _Skipped:
            result.skipped.append(check_id)
            continue
        except TwoRayError as e:
            problems = [f"{type(e).__name__}: {e}"]
        result.failures.extend(CheckFailure(canonical, check_id, p) for p in problems)
    if result.failures:
        logger.warning(f"{canonical}: расхождений {len(result.failures)}")
    return result


async def run_checks(
    systems: Iterable[DefiningSystem],
    workers: int = 1,
    verify_budget: int = 400,
    path_budget: int = 20000,
) -> CheckAllReport:
    """Проверяет системы, при workers > 1 в пуле процессов; порядок вывода фиксирован."""
    systems = list(systems)
    logger.info(f"Проверка {len(systems)} систем, процессов: {workers}")

    if workers <= 1:
        results = [
            check_system(k, ds, verify_budget, path_budget) for k, ds in enumerate(systems)
        ]
    else:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                loop.run_in_executor(pool, check_system, k, ds, verify_budget, path_budget)
                for k, ds in enumerate(systems)
            ]
            results = await asyncio.gather(*futures)

    report = CheckAllReport(systems=len(systems))
    for result in sorted(results, key=lambda r: r.order):
        report.failures.extend(sorted(result.failures))
        for check_id in result.skipped:
            report.skipped[check_id] = report.skipped.get(check_id, 0) + 1
    logger.info(f"Проверка завершена: расхождений {len(report.failures)}")
    return report
