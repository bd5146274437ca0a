"""Комбинаторные структуры для двухлучевых модулей: аксиомы C1-C14, σ, η, v, u, допустимость, расширение."""
from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any

from services.errors import DomainError, InternalError, PreconditionError, StructureError
from services.models import PartialMap, sorted_indices

logger = logging.getLogger(__name__)

Index = Hashable

BASIC_AXIOMS = tuple(f"C{k}" for k in range(1, 12))
WEIGHT_AXIOMS = ("C12", "C13", "C14")


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    status: str  # pass | fail | skipped
    witnesses: tuple = ()

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class AxiomReport:
    results: tuple[AxiomResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> list[AxiomResult]:
        return [r for r in self.results if r.status == "fail"]

    def __getitem__(self, axiom: str) -> AxiomResult:
        for result in self.results:
            if result.axiom == axiom:
                return result
        raise KeyError(axiom)


@dataclass(frozen=True, eq=False)
class CombStructure:
    """
    Структура ⟨I, φ, ρ, ψ, l⟩.

    Индексы непрозрачны: нужны только равенство и полный порядок.
    Область определения l проверяется при создании.
    """

    I: frozenset
    phi: PartialMap
    rho: PartialMap
    psi: PartialMap
    l: Mapping[Index, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "I", frozenset(self.I))
        for name, symbol in (("phi", "φ"), ("rho", "ρ"), ("psi", "ψ")):
            value = getattr(self, name)
            if not isinstance(value, PartialMap):
                object.__setattr__(self, name, PartialMap(value, name=symbol))
        object.__setattr__(self, "l", MappingProxyType(dict(self.l)))

        for name in ("phi", "rho", "psi"):
            pmap: PartialMap = getattr(self, name)
            outside = (pmap.domain | pmap.image) - self.I
            if outside:
                raise StructureError(f"{pmap.name} выходит за пределы I: {sorted_indices(outside)}")

        expected = (self.phi.domain | self.rho.domain) - self.psi.domain
        if set(self.l) != expected:
            missing = sorted_indices(expected - set(self.l))
            extra = sorted_indices(set(self.l) - expected)
            raise StructureError(
                f"Область определения l неверна: не хватает {missing}, лишние {extra}"
            )
        positive = sorted_indices(k for k, v in self.l.items() if v > 0)
        if positive:
            raise StructureError(f"l должно быть неположительным, нарушено в {positive}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CombStructure):
            return NotImplemented
        return (
            self.I == other.I
            and self.phi == other.phi
            and self.rho == other.rho
            and self.psi == other.psi
            and dict(self.l) == dict(other.l)
        )

    __hash__ = None

    @cached_property
    def axioms(self) -> AxiomReport:
        return check_axioms(self)

    def to_dict(self) -> dict[str, Any]:
        """Отладочный дамп с строковыми именами индексов."""

        def dump(pmap: Mapping) -> dict[str, Any]:
            return {str(k): str(pmap[k]) for k in sorted_indices(pmap)}

        return {
            "I": [str(i) for i in sorted_indices(self.I)],
            "phi": dump(self.phi),
            "rho": dump(self.rho),
            "psi": dump(self.psi),
            "l": {str(k): self.l[k] for k in sorted_indices(self.l)},
        }


def _result(axiom: str, witnesses: Iterable) -> AxiomResult:
    witnesses = tuple(sorted_indices(witnesses))
    return AxiomResult(axiom, "fail" if witnesses else "pass", witnesses)


def check_axioms(cs: CombStructure) -> AxiomReport:
    """Проверяет C1-C11; C12-C14 только если C1-C11 выполнены."""
    phi, rho, psi = cs.phi, cs.rho, cs.psi
    results = [
        _result("C1", cs.I - (phi.image | rho.image | psi.image)),
        _result("C2", phi.image & rho.image),
        _result("C3", phi.image & psi.image),
        _result("C4", rho.image & psi.image),
        _result("C5", phi.domain & rho.domain),
        _result("C6", rho.domain & rho.image),
        _result("C7", phi.image - (phi.domain | rho.domain)),
        _result("C8", psi.domain - phi.domain),
        _result("C9", rho.image & psi.domain),
        _result("C10", psi.image - (phi.domain | rho.domain)),
        _result("C11", (x for x in psi.domain if _iterate(psi, x, len(cs.I)) is not None)),
    ]

    if not all(r.passed for r in results):
        results.extend(AxiomResult(axiom, "skipped") for axiom in WEIGHT_AXIOMS)
        return AxiomReport(tuple(results))

    def weight(x: Index) -> int | None:
        return cs.l.get(x)

    c12 = []
    for x in psi.domain:
        w = weight(sigma(cs, x))
        if w is None or w >= 0:
            c12.append(x)
    results.append(_result("C12", c12))

    c13 = []
    for x in phi.domain & rho.image:
        if weight(x) != 0 or weight(sigma(cs, x)) != 0:
            c13.append(x)
    results.append(_result("C13", c13))

    results.append(_result("C14", (x for x in cs.I if _u_walk(cs, x) is None)))
    report = AxiomReport(tuple(results))
    if not report.ok:
        logger.debug(f"Аксиомы нарушены: {[r.axiom for r in report.failed()]}")
    return report


def _iterate(pmap: PartialMap, x: Index, times: int) -> Index | None:
    for _ in range(times):
        x = pmap(x)
        if x is None:
            return None
    return x


def v(cs: CombStructure, x: Index) -> int:
    """Наибольшее v ≥ 0, при котором ψ^v x определено."""
    if x not in cs.I:
        raise DomainError(f"Индекс {x} не лежит в I")
    count = 0
    while x in cs.psi:
        x = cs.psi[x]
        count += 1
        if count > len(cs.I):
            raise PreconditionError("ψ имеет цикл: нарушена аксиома C11", clause="C11")
    return count


def sigma(cs: CombStructure, x: Index) -> Index:
    """σx = ψ^{v_{φx}} φx."""
    if x not in cs.phi:
        raise DomainError(f"σ не определено в {x}: индекс вне Dom φ")
    y = cs.phi[x]
    return _iterate(cs.psi, y, v(cs, y))


def eta(cs: CombStructure, x: Index) -> Index:
    if x in cs.phi:
        return sigma(cs, x)
    if x in cs.rho:
        return cs.rho[x]
    raise DomainError(f"η не определено в {x}: индекс вне Dom φ ∪ Dom ρ")


def _u_walk(cs: CombStructure, x: Index) -> int | None:
    """u_x или None, если подходящего u нет (нарушение C14)."""
    tail = cs.rho.image - cs.phi.domain
    current = x
    total = 0
    summable = True
    hit: int | None = 0 if current in tail else None
    for step in range(len(cs.I) + 1):
        if current not in cs.phi and current not in cs.rho:
            return hit
        current = eta(cs, current)
        if summable:
            w = cs.l.get(current)
            if w is None:
                summable = False
            else:
                total += w
                if total < 0:
                    return step
        if hit is None and current in tail:
            hit = step + 1
            if not summable:
                return hit
    return None


def u(cs: CombStructure, x: Index) -> int:
    if x not in cs.I:
        raise DomainError(f"Индекс {x} не лежит в I")
    result = _u_walk(cs, x)
    if result is None:
        raise PreconditionError(f"u не определено в {x}: нарушена аксиома C14", clause="C14")
    return result


def eta_power(cs: CombStructure, x: Index, k: int) -> Index:
    for _ in range(k):
        x = eta(cs, x)
    return x


def _require_axioms(cs: CombStructure) -> None:
    if not cs.axioms.ok:
        failed = ", ".join(r.axiom for r in cs.axioms.failed())
        raise PreconditionError(f"Структура не удовлетворяет аксиомам: {failed}", clause=failed)


def admissible(cs: CombStructure, y: Index) -> bool:
    """Условия A1-A5."""
    _require_axioms(cs)
    if y not in cs.phi:
        return False
    sy = sigma(cs, y)
    if sy not in cs.phi:
        return False
    if cs.l.get(sy) != 0:
        return False
    if y in cs.rho.image and eta_power(cs, y, u(cs, y)) not in cs.phi:
        return False
    return all(sigma(cs, r) != y for r in cs.rho.image if r in cs.phi)


def admissible_set(cs: CombStructure) -> frozenset:
    _require_axioms(cs)
    return frozenset(y for y in cs.I if admissible(cs, y))


def extend(cs: CombStructure, y: Index, y_new: Index) -> CombStructure:
    """Расширение структуры по допустимому индексу y новым индексом y_new."""
    if y_new in cs.I:
        raise PreconditionError(f"Новый индекс {y_new} уже лежит в I", clause="fresh")
    if not admissible(cs, y):
        raise PreconditionError(f"Индекс {y} не допустим", clause="A1-A5")

    phi = {k: val for k, val in cs.phi.items() if k != y}
    phi[y_new] = cs.phi[y]
    I = cs.I | {y_new}

    if y not in cs.rho.image:
        rho = cs.rho.extended(y, y_new)
        l = dict(cs.l)
        l[y_new] = 0
        return CombStructure(I, PartialMap(phi, name="φ"), rho, cs.psi, l)

    target = eta_power(cs, y, u(cs, y))
    if target == y or target not in cs.phi or target in cs.psi:
        raise InternalError(f"η^u({y}) = {target} не лежит в Dom φ ∖ Dom ψ или совпадает с y")
    psi = cs.psi.extended(target, y_new)

    sy = sigma(cs, y)
    ssy = sigma(cs, sy)
    domain = (set(phi) | set(cs.rho)) - set(psi)
    l = {}
    for k in domain:
        if k == y_new:
            l[k] = -2 if target in (sy, ssy) else 0
        elif k == ssy and target != sy:
            l[k] = -2
        else:
            l[k] = cs.l[k]
    result = CombStructure(I, PartialMap(phi, name="φ"), cs.rho, psi, l)
    logger.debug(f"Расширение по {y}: ψ'({target}) = {y_new}")
    return result
