"""Определяющие системы (p, q, S, T): разбор, проверка, сериализация, перебор."""
from __future__ import annotations

import itertools
import json
import logging
import re
from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property

from pydantic import BaseModel, ConfigDict, PositiveInt, ValidationError, model_validator

from services.errors import InvalidSystemError, ParseError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DefiningSystem:
    """
    Определяющая система.

    Ветви нумеруются с 1; все обращения по номеру ветви циклические.
    Структурная корректность (длины, положительность, возрастание множеств)
    гарантируется при разборе, ограничения DS1-DS6 проверяет validate().
    """

    p: tuple[int, ...]
    q: tuple[int, ...]
    S: tuple[tuple[int, ...], ...]
    T: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.p)

    def branches(self) -> range:
        return range(1, self.n + 1)

    def _at(self, seq: tuple, i: int):
        return seq[(i - 1) % self.n]

    def p_at(self, i: int) -> int:
        return self._at(self.p, i)

    def q_at(self, i: int) -> int:
        return self._at(self.q, i)

    def S_at(self, i: int) -> tuple[int, ...]:
        return self._at(self.S, i)

    def T_at(self, i: int) -> tuple[int, ...]:
        return self._at(self.T, i)

    def top(self, i: int) -> int:
        """p_i + |T_i|: наибольший второй индекс вершины x на ветви i."""
        return self.p_at(i) + len(self.T_at(i))

    def wrap(self, i: int) -> int:
        return (i - 1) % self.n + 1

    @cached_property
    def canonical(self) -> str:
        return serialize(self)

    def __str__(self) -> str:
        return self.canonical


@dataclass(frozen=True)
class Violation:
    """Нарушенное ограничение; branch = 0 для глобальных ограничений."""

    constraint: str
    branch: int
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def constraint_ids(self) -> list[str]:
        return sorted({v.constraint for v in self.violations})

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"constraint": v.constraint, "branch": v.branch, "message": v.message}
                for v in self.violations
            ],
        }


@dataclass(frozen=True)
class EnumerationBounds:
    max_n: int
    max_p: int
    max_q: int
    max_t: int

    def __post_init__(self) -> None:
        errors = []
        for name in ("max_n", "max_p", "max_q"):
            if getattr(self, name) < 1:
                errors.append(f"{name} должен быть не меньше 1")
        if self.max_t < 0:
            errors.append("max_t не может быть отрицательным")
        if errors:
            raise PreconditionError("Ошибки границ перебора: " + "; ".join(errors))


class DefiningSystemPayload(BaseModel):
    """Схема JSON-представления определяющей системы."""

    model_config = ConfigDict(extra="forbid", strict=True)

    p: list[PositiveInt]
    q: list[PositiveInt]
    S: list[list[int]]
    T: list[list[int]]

    @model_validator(mode="after")
    def check_shape(self) -> "DefiningSystemPayload":
        n = len(self.p)
        if n == 0:
            raise ValueError("p не может быть пустым")
        for name in ("q", "S", "T"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"длина {name} должна совпадать с длиной p ({n})")
        for name in ("S", "T"):
            for idx, values in enumerate(getattr(self, name), start=1):
                if any(b <= a for a, b in zip(values, values[1:])):
                    raise ValueError(f"{name}[{idx}] должно строго возрастать")
        return self

    def to_system(self) -> DefiningSystem:
        return DefiningSystem(
            p=tuple(self.p),
            q=tuple(self.q),
            S=tuple(tuple(s) for s in self.S),
            T=tuple(tuple(t) for t in self.T),
        )


def _line_column(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    return line, pos - text.rfind("\n", 0, pos)


def _key_position(text: str, loc: tuple) -> int:
    """Позиция ключа верхнего уровня из loc; без ключа в тексте начало объекта."""
    if loc and isinstance(loc[0], str):
        match = re.search(re.escape(json.dumps(loc[0])) + r"\s*:", text)
        if match:
            return match.start()
    return len(text) - len(text.lstrip())


def parse(text: str) -> DefiningSystem:
    """
    Разбирает JSON и проверяет систему.

    Raises:
        ParseError: Некорректный JSON или нарушена схема
        InvalidSystemError: Нарушены ограничения DS1-DS6
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Некорректный JSON: {e.msg}", e.lineno, e.colno, e.pos) from e

    try:
        payload = DefiningSystemPayload.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<корень>"
        pos = _key_position(text, first["loc"])
        line, column = _line_column(text, pos)
        raise ParseError(f"Нарушена схема в {where}: {first['msg']}", line, column, pos) from e

    ds = payload.to_system()
    report = validate(ds)
    if not report.ok:
        raise InvalidSystemError(report)
    logger.debug(f"Разобрана система {serialize(ds)}")
    return ds


def system_to_dict(ds: DefiningSystem) -> dict:
    return {
        "p": list(ds.p),
        "q": list(ds.q),
        "S": [list(s) for s in ds.S],
        "T": [list(t) for t in ds.T],
    }


def serialize(ds: DefiningSystem) -> str:
    """Каноническая компактная JSON-запись с ключами в порядке p, q, S, T."""
    return json.dumps(system_to_dict(ds), separators=(",", ":"))


def validate(ds: DefiningSystem) -> ValidationReport:
    """Проверяет ограничения DS1-DS6 и возвращает все нарушения."""
    violations: list[Violation] = []

    if sum(ds.p) < 2:
        violations.append(Violation("DS1", 0, f"сумма p равна {sum(ds.p)}, нужно не меньше 2"))

    for i in ds.branches():
        S, T = set(ds.S_at(i)), set(ds.T_at(i))
        top = ds.top(i)
        if not T <= S:
            violations.append(
                Violation("DS2", i, f"T_{i} не содержится в S_{i}: лишние {sorted(T - S)}")
            )
        outside = sorted(s for s in S if not 2 <= s <= top)
        if outside:
            violations.append(Violation("DS3", i, f"элементы S_{i} вне [2, {top}]: {outside}"))
        if top in T:
            violations.append(Violation("DS4", i, f"p_{i}+|T_{i}| = {top} лежит в T_{i}"))
        adjacent = sorted(s for s in S if s + 1 in S)
        if adjacent:
            violations.append(
                Violation("DS5", i, f"соседние элементы в S_{i}: {[(s, s + 1) for s in adjacent]}")
            )
        if ds.p_at(i) == 1 and T:
            violations.append(Violation("DS6", i, f"p_{i} = 1, но T_{i} непусто"))

    return ValidationReport(tuple(violations))


def is_fundamental(ds: DefiningSystem) -> bool:
    return all(not s and not t for s, t in zip(ds.S, ds.T))


def _branch_options(p: int, max_t: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Все допустимые пары (S_i, T_i) для ветви с данным p_i."""
    options = []
    for size in range(max_t + 1 if p > 1 else 1):
        top = p + size
        candidates = range(2, top + 1)
        for k in range(len(candidates) + 1):
            for S in itertools.combinations(candidates, k):
                if any(b == a + 1 for a, b in zip(S, S[1:])):
                    continue
                for T in itertools.combinations([s for s in S if s != top], size):
                    options.append((S, T))
    return options


def enumerate_systems(bounds: EnumerationBounds) -> Iterator[DefiningSystem]:
    """Все валидные системы в границах, в лексикографическом порядке (n, p, q, S, T)."""
    for n in range(1, bounds.max_n + 1):
        for p in itertools.product(range(1, bounds.max_p + 1), repeat=n):
            if sum(p) < 2:
                continue
            options = [_branch_options(pi, bounds.max_t) for pi in p]
            combos = sorted(
                itertools.product(*options),
                key=lambda combo: (tuple(c[0] for c in combo), tuple(c[1] for c in combo)),
            )
            for q in itertools.product(range(1, bounds.max_q + 1), repeat=n):
                for combo in combos:
                    yield DefiningSystem(
                        p=p,
                        q=q,
                        S=tuple(c[0] for c in combo),
                        T=tuple(c[1] for c in combo),
                    )
