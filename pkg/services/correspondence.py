"""Структура определяющей системы, допустимые индексы, расширения и спуск к фундаментальной системе."""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache

from services import comb_structure as cst
from services.comb_structure import CombStructure
from services.defining_system import DefiningSystem, serialize, system_to_dict, validate
from services.errors import AncestryError, DomainError, InternalError, PreconditionError
from services.models import PartialMap, Vertex, sorted_indices, x, z
from services.navigation import Navigator, navigator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DerivedStructure:
    system: DefiningSystem
    structure: CombStructure

    @property
    def navigator(self) -> Navigator:
        return navigator(self.system)

    @cached_property
    def x_indices(self) -> frozenset[Vertex]:
        return frozenset(v for v in self.structure.I if v.kind == "x")


@dataclass(frozen=True)
class ExtensionStep:
    index: Vertex
    system: DefiningSystem
    new_index: Vertex

    def to_dict(self) -> dict:
        return {
            "index": str(self.index),
            "new_index": str(self.new_index),
            "system": system_to_dict(self.system),
        }


@dataclass(frozen=True)
class CrossCheck:
    """Результат сравнения двух путей расширения; diff пуст при совпадении."""

    diff: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.diff

    def __bool__(self) -> bool:
        return self.ok


def weight(ds: DefiningSystem, v: Vertex) -> int:
    """l_x по пятивариантной формуле; номера ветвей циклические."""
    if v.kind != "x":
        return 0
    maps = navigator(ds).maps
    i, j = v.i, v.j
    if j == 1 and ds.p_at(i) > 1:
        return -ds.q_at(i - 1)
    if j == 0 and ds.p_at(i - 1) == 1:
        return -ds.q_at(i - 2)
    if v in maps.P and maps.P[v] in maps.image_ST:
        return -2
    if v in maps.P_inv and v in maps.R_inv and maps.P_inv[v] == maps.R_inv[v]:
        return -2
    return 0


@lru_cache(maxsize=256)
def derive_structure(ds: DefiningSystem) -> DerivedStructure:
    nav = navigator(ds)
    classes, maps = nav.classes, nav.maps

    I = (classes.x_all - classes.x4) | classes.z
    excluded = maps.image_PS | maps.T.image

    phi = {}
    for v in I - excluded:
        if v.kind == "x":
            phi[v] = nav.mu(maps.P_inv[v]).target
        else:
            phi[v] = nav.mu(maps.S[v]).target

    rho = maps.P.compose(maps.S).inverse()
    psi = maps.R.restrict(maps.R.domain - classes.x4).inverse()

    l_domain = (set(phi) | rho.domain) - psi.domain
    structure = CombStructure(
        I=I,
        phi=PartialMap(phi, name="φ"),
        rho=PartialMap(rho, name="ρ"),
        psi=PartialMap(psi, name="ψ"),
        l={v: weight(ds, v) for v in l_domain},
    )
    logger.debug(
        f"Структура {serialize(ds)}: |I|={len(I)}, |Dom φ|={len(phi)}, "
        f"|Dom ρ|={len(rho)}, |Dom ψ|={len(psi)}"
    )
    return DerivedStructure(ds, structure)


def _phi_case(ds: DefiningSystem, v: Vertex) -> Vertex:
    """Вершина 𝔓⁻x (для x) или 𝔖x (для z), через которую выражаются σ и η."""
    derived = derive_structure(ds)
    if v not in derived.structure.phi:
        raise DomainError(f"Индекс {v} не лежит в Dom φ")
    maps = navigator(ds).maps
    return maps.P_inv[v] if v.kind == "x" else maps.S[v]


def sigma_closed_form(ds: DefiningSystem, v: Vertex) -> Vertex:
    nav = navigator(ds)
    w = _phi_case(ds, v)
    return nav.maps.R[w] if w in nav.classes.x4 else w


def eta_closed_form(ds: DefiningSystem, v: Vertex) -> Vertex:
    maps = navigator(ds).maps
    if v in maps.image_PS:
        return maps.S_inv[maps.P_inv[v]]
    return sigma_closed_form(ds, v)


def psi_power_closed_form(ds: DefiningSystem, v: Vertex) -> Vertex:
    """ψ^{v_x} x через начало пути ν_x."""
    nav = navigator(ds)
    classes, maps = nav.classes, nav.maps
    if v in classes.z:
        return v
    if v not in classes.x_all or v in classes.x4:
        raise DomainError(f"Индекс {v} не лежит в I")
    start = nav.nu(v).source
    if start.kind == "z":
        start = maps.S[start]
    return maps.R[start] if start in classes.x4 else start


def admissible_lemma(ds: DefiningSystem) -> frozenset[Vertex]:
    """Допустимые индексы по явному описанию через 𝔓, 𝔖, 𝔗 и h."""
    nav = navigator(ds)
    classes, maps = nav.classes, nav.maps
    image_PPS = frozenset(maps.P[v] for v in maps.image_PS if v in maps.P)
    excluded = classes.x0 | classes.x4 | maps.S.image | maps.image_PS | image_PPS
    result = set(classes.x_all - excluded)
    for v in classes.z - maps.T.image:
        if nav.h(maps.S[v]) == ds.top(v.i):
            result.add(v)
    return frozenset(result)


def _failed_clause(ds: DefiningSystem, v: Vertex) -> str:
    nav = navigator(ds)
    classes, maps = nav.classes, nav.maps
    if v.kind == "z":
        if v not in classes.z:
            return "индекс не является вершиной 𝔷"
        if v in maps.T.image:
            return "z ∈ Im 𝔗"
        return f"h(𝔖z) = {nav.h(maps.S[v])} < p_i + |T_i| = {ds.top(v.i)}"
    checks = (
        (classes.x_all, "индекс не является вершиной 𝔵", True),
        (classes.x0, "x ∈ 𝔵₀", False),
        (classes.x4, "x ∈ 𝔵₄", False),
        (maps.S.image, "x ∈ Im 𝔖", False),
        (maps.image_PS, "x ∈ Im 𝔓𝔖", False),
    )
    for values, message, must_contain in checks:
        if (v in values) != must_contain:
            return message
    return "x ∈ Im 𝔓²𝔖"


def extend_ds(ds: DefiningSystem, y: Vertex) -> ExtensionStep:
    """Расширение системы по допустимому индексу y."""
    if y not in admissible_lemma(ds):
        clause = _failed_clause(ds, y)
        logger.warning(f"Индекс {y} недопустим для {serialize(ds)}: {clause}")
        raise PreconditionError(f"Индекс {y} недопустим: {clause}", clause=clause)

    i0, j0 = y.i, y.j
    S, T = list(ds.S), list(ds.T)
    if y.kind == "x":
        S[i0 - 1] = tuple(sorted(ds.S_at(i0) + (j0 + 1,)))
        new_index = z(i0, j0 + 1)
    else:
        T[i0 - 1] = tuple(sorted(ds.T_at(i0) + (j0,)))
        new_index = x(i0, ds.top(i0))
    extended = replace(ds, S=tuple(S), T=tuple(T))

    report = validate(extended)
    if not report.ok:
        raise InternalError(
            f"Расширение {serialize(ds)} по {y} невалидно: {report.constraint_ids()}"
        )
    return ExtensionStep(index=y, system=extended, new_index=new_index)


def structure_diff(expected: CombStructure, actual: CombStructure) -> tuple[str, ...]:
    diff = []
    if expected.I != actual.I:
        diff.append(
            f"I: лишние {sorted_indices(actual.I - expected.I)}, "
            f"не хватает {sorted_indices(expected.I - actual.I)}"
        )
    for name in ("phi", "rho", "psi"):
        left, right = dict(getattr(expected, name)), dict(getattr(actual, name))
        for key in sorted_indices(set(left) | set(right)):
            if left.get(key) != right.get(key):
                diff.append(f"{name}({key}): ожидалось {left.get(key)}, получено {right.get(key)}")
    for key in sorted_indices(set(expected.l) | set(actual.l)):
        if expected.l.get(key) != actual.l.get(key):
            diff.append(f"l({key}): ожидалось {expected.l.get(key)}, получено {actual.l.get(key)}")
    return tuple(diff)


def cross_check_extension(ds: DefiningSystem, y: Vertex) -> CrossCheck:
    """Сравнивает структуру расширенной системы с абстрактным расширением структуры."""
    step = extend_ds(ds, y)
    expected = cst.extend(derive_structure(ds).structure, y, step.new_index)
    actual = derive_structure(step.system).structure
    result = CrossCheck(structure_diff(expected, actual))
    if not result.ok:
        logger.warning(f"Расширение {serialize(ds)} по {y} расходится: {result.diff}")
    return result


def fundamental_of(ds: DefiningSystem) -> DefiningSystem:
    empty = tuple(() for _ in ds.p)
    return replace(ds, S=empty, T=empty)


def _next_action(
    ds: DefiningSystem, S_cur: list[set[int]], T_cur: list[set[int]]
) -> tuple[int, int, int] | None:
    """Наименьшее применимое действие (ветвь, значение, 0 для S / 1 для T)."""
    candidates = []
    for i in ds.branches():
        S_now, T_now = S_cur[i - 1], T_cur[i - 1]
        top = ds.p_at(i) + len(T_now)
        for s in set(ds.S_at(i)) - S_now:
            if s <= top and not {s - 1, s, s + 1} & S_now:
                candidates.append((i, s, 0))
        for t in set(ds.T_at(i)) - T_now:
            if t in S_now and (not T_now or t > max(T_now)):
                candidates.append((i, t, 1))
    return min(candidates) if candidates else None


def ancestry(ds: DefiningSystem) -> tuple[ExtensionStep, ...]:
    """Цепочка расширений от фундаментальной системы до ds."""
    current = fundamental_of(ds)
    S_cur: list[set[int]] = [set() for _ in ds.p]
    T_cur: list[set[int]] = [set() for _ in ds.p]
    chain: list[ExtensionStep] = []
    expected_length = sum(len(s) + len(t) for s, t in zip(ds.S, ds.T))

    while len(chain) < expected_length:
        action = _next_action(ds, S_cur, T_cur)
        if action is None:
            raise AncestryError(
                f"Спуск к {serialize(ds)} остановился после {len(chain)} шагов",
                partial_chain=tuple(chain),
            )
        i, value, kind = action
        y = x(i, value - 1) if kind == 0 else z(i, value)
        if y not in admissible_lemma(current):
            raise AncestryError(
                f"Индекс {y} недопустим на шаге {len(chain) + 1} для {serialize(current)}",
                partial_chain=tuple(chain),
            )
        step = extend_ds(current, y)
        chain.append(step)
        current = step.system
        (S_cur if kind == 0 else T_cur)[i - 1].add(value)

    if current != ds:
        raise AncestryError(
            f"Цепочка привела к {serialize(current)} вместо {serialize(ds)}",
            partial_chain=tuple(chain),
        )
    return tuple(chain)


def replay(start: DefiningSystem, chain: tuple[ExtensionStep, ...]) -> DefiningSystem:
    """Последовательно применяет extend_ds по индексам цепочки."""
    current = start
    for step in chain:
        current = extend_ds(current, step.index).system
    return current


def closed_form_mismatches(ds: DefiningSystem) -> list[tuple[str, str]]:
    """Сверяет явные формулы с общими вычислениями; возвращает (проверка, свидетель)."""
    derived = derive_structure(ds)
    cs = derived.structure
    nav = derived.navigator
    maps = nav.maps
    mismatches: list[tuple[str, str]] = []

    for v in sorted_indices(cs.I):
        generic = cst._iterate(cs.psi, v, cst.v(cs, v))
        if psi_power_closed_form(ds, v) != generic:
            mismatches.append(("psi_power", str(v)))
    for v in sorted_indices(cs.phi.domain):
        generic_sigma = cst.sigma(cs, v)
        if sigma_closed_form(ds, v) != generic_sigma:
            mismatches.append(("sigma", str(v)))
        if (cs.l.get(generic_sigma, 0) < 0) != (v in maps.R.image):
            mismatches.append(("l_sigma_sign", str(v)))
    for v in sorted_indices(cs.phi.domain | cs.rho.domain):
        if eta_closed_form(ds, v) != cst.eta(cs, v):
            mismatches.append(("eta", str(v)))
    for v in sorted_indices(cs.I):
        if v.kind == "x" and nav.t_mu_closed(v) != nav.mu(v).target:
            mismatches.append(("t_mu", str(v)))
        if v.kind == "x" and nav.s_nu_closed(v) != nav.nu(v).source:
            mismatches.append(("s_nu", str(v)))
    for y in sorted_indices(admissible_lemma(ds)):
        if y.kind == "z":
            reached = cst.eta_power(cs, y, cst.u(cs, y))
            if reached != maps.R[x(y.i, ds.top(y.i))]:
                mismatches.append(("eta_u_admissible", str(y)))
    return mismatches
