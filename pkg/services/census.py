"""Перепись компонент колчана Ауслендера-Рейтен по определяющей системе."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from services import comb_structure as cst
from services.correspondence import derive_structure
from services.defining_system import DefiningSystem, serialize, system_to_dict
from services.errors import InternalError
from services.models import Vertex, sorted_indices, x

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SigmaCycle:
    branch: int
    start: int
    vertices: tuple[Vertex, ...]

    def to_dict(self) -> dict:
        return {"branch": self.branch, "vertices": [str(v) for v in self.vertices]}


@dataclass(frozen=True)
class CensusReport:
    system: DefiningSystem
    preprojective_type: tuple[int, int]
    coray_tube_families: int
    first_type: int
    second_type: int
    preinjective_types: tuple[tuple[int, int], ...]
    has_ZD_infinity: bool
    has_ZA_infinity_infinity: bool
    M: int
    N: int
    L: int
    sigma_cycles: tuple[SigmaCycle, ...]

    def to_dict(self) -> dict:
        return {
            "system": system_to_dict(self.system),
            "preprojective_type": list(self.preprojective_type),
            "coray_tube_families": self.coray_tube_families,
            "first_type": self.first_type,
            "second_type": self.second_type,
            "preinjective_types": [list(t) for t in self.preinjective_types],
            "has_ZD_infinity": self.has_ZD_infinity,
            "has_ZA_infinity_infinity": self.has_ZA_infinity_infinity,
            "M": self.M,
            "N": self.N,
            "L": self.L,
            "sigma_cycles": [c.to_dict() for c in self.sigma_cycles],
        }


@dataclass(frozen=True)
class PreconditionUnmet:
    """Система фундаментальна (все S_i пусты): алгебра наследственна, перепись не применима."""

    system: DefiningSystem
    reason: str = "fundamental/hereditary: census precondition unmet"

    def to_dict(self) -> dict:
        return {"system": system_to_dict(self.system), "precondition_unmet": self.reason}


def sigma_cycles(ds: DefiningSystem) -> list[SigmaCycle]:
    """Циклы {x_{i,j}, …, x_{i,top-1}} для j ∈ T_i без элементов S_i в [j+1, top]."""
    cycles = []
    for i in ds.branches():
        top, S = ds.top(i), set(ds.S_at(i))
        for j in ds.T_at(i):
            if not S & set(range(j + 1, top + 1)):
                cycles.append(SigmaCycle(i, j, tuple(x(i, k) for k in range(j, top))))
    return cycles


def generic_sigma_cycles(ds: DefiningSystem) -> list[frozenset[Vertex]]:
    """Циклы частичного отображения σ выведенной структуры."""
    cs = derive_structure(ds).structure
    found: set[frozenset[Vertex]] = set()
    for start in sorted_indices(cs.phi.domain):
        orbit = [start]
        current = cst.sigma(cs, start)
        while current in cs.phi and current not in orbit:
            orbit.append(current)
            current = cst.sigma(cs, current)
        if current == start:
            found.add(frozenset(orbit))
    return sorted(found, key=lambda c: sorted_indices(c))


def _preinjective_types(ds: DefiningSystem) -> list[tuple[int, int]]:
    types = []
    for i in ds.branches():
        S = ds.S_at(i)
        if S and max(S) in ds.T_at(i):
            types.append((2, ds.top(i) - max(S)))
    return types


def census(ds: DefiningSystem) -> CensusReport | PreconditionUnmet:
    """
    Число и типы компонент по числам M = Σ|S_i|, N = Σ|T_i| и σ-циклам.

    Числа M, N, L дополнительно пересчитываются по выведенной структуре;
    расхождение означает ошибку в реализации.
    """
    M = sum(len(s) for s in ds.S)
    if M == 0:
        logger.info(f"Перепись для {serialize(ds)} не применима: все S_i пусты")
        return PreconditionUnmet(ds)
    N = sum(len(t) for t in ds.T)

    cycles = sigma_cycles(ds)
    preinjective = _preinjective_types(ds)
    L = len(preinjective)

    cs = derive_structure(ds).structure
    problems = []
    if len(cycles) != L:
        problems.append(f"σ-циклов {len(cycles)}, а L = {L}")
    if len(cs.rho) != M:
        problems.append(f"|Dom ρ| = {len(cs.rho)}, а M = {M}")
    if len(cs.psi) != N:
        problems.append(f"|Dom ψ| = {len(cs.psi)}, а N = {N}")
    for cycle in cycles:
        if cycle.start != max(ds.S_at(cycle.branch)):
            problems.append(f"σ-цикл на ветви {cycle.branch} начинается не с max S_i")
    generic = generic_sigma_cycles(ds)
    if sorted(generic, key=sorted_indices) != sorted(
        (frozenset(c.vertices) for c in cycles), key=sorted_indices
    ):
        problems.append(f"σ-циклы структуры {[sorted_indices(c) for c in generic]} не совпадают")
    if problems:
        raise InternalError(f"Перепись {serialize(ds)}: " + "; ".join(problems))

    return CensusReport(
        system=ds,
        preprojective_type=(sum(ds.p), sum(ds.q)),
        coray_tube_families=N + 1,
        first_type=M - N,
        second_type=N,
        preinjective_types=tuple(preinjective),
        has_ZD_infinity=N > 0,
        has_ZA_infinity_infinity=N > L,
        M=M,
        N=N,
        L=L,
        sigma_cycles=tuple(cycles),
    )
