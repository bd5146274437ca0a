"""Базовые типы: вершины, стрелки, пути, соотношения и частичные отображения."""
from __future__ import annotations

import re
from collections.abc import Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Any

from services.errors import DomainError, StructureError

VERTEX_KINDS = ("x", "y", "z")
ARROW_KINDS = ("alpha", "beta", "gamma", "xi")
ARROW_SYMBOLS = {"alpha": "α", "beta": "β", "gamma": "γ", "xi": "ξ"}

_VERTEX_PATTERN = re.compile(r"^\s*([xyz])\s*[:_,]\s*(\d+)\s*[:_,]\s*(\d+)\s*$")


@dataclass(frozen=True, order=True)
class Vertex:
    """Вершина колчана: x_{i,j}, y_{i,j} или z_{i,j} (i нумеруется с 1)."""

    kind: str
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.kind not in VERTEX_KINDS:
            raise DomainError(f"Неизвестный тип вершины: {self.kind}")

    def __str__(self) -> str:
        return f"{self.kind}_{self.i}_{self.j}"

    @property
    def label(self) -> str:
        return f"{self.kind}_{{{self.i},{self.j}}}"

    @classmethod
    def parse(cls, text: str) -> "Vertex":
        """Разбирает запись вида 'z:1:8' или 'x_2_0'."""
        match = _VERTEX_PATTERN.match(text)
        if match is None:
            raise DomainError(f"Не удалось разобрать вершину: {text!r}")
        kind, i, j = match.groups()
        return cls(kind, int(i), int(j))


def x(i: int, j: int) -> Vertex:
    return Vertex("x", i, j)


def z(i: int, j: int) -> Vertex:
    return Vertex("z", i, j)


@dataclass(frozen=True, order=True)
class Arrow:
    """Стрелка колчана с источником и целью."""

    kind: str
    i: int
    j: int
    source: Vertex
    target: Vertex

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.i}_{self.j}"

    @property
    def label(self) -> str:
        return f"{ARROW_SYMBOLS[self.kind]}_{{{self.i},{self.j}}}"

    @property
    def first_kind(self) -> bool:
        # Первого рода только стрелки α
        return self.kind == "alpha"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Path:
    """Путь в колчане; стрелки хранятся в порядке прохождения."""

    source: Vertex
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        current = self.source
        for arrow in self.arrows:
            if arrow.source != current:
                raise DomainError(
                    f"Стрелка {arrow.name} не продолжает путь из вершины {current}"
                )
            current = arrow.target

    @property
    def target(self) -> Vertex:
        return self.arrows[-1].target if self.arrows else self.source

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return (self.source,) + tuple(a.target for a in self.arrows)

    def __len__(self) -> int:
        return len(self.arrows)

    def then(self, other: "Path") -> "Path":
        """Путь: сначала self, затем other."""
        if self.target != other.source:
            raise DomainError(f"Пути не стыкуются: {self.target} != {other.source}")
        return Path(self.source, self.arrows + other.arrows)

    @property
    def label(self) -> str:
        """Запись композицией справа налево (последняя стрелка слева)."""
        if not self.arrows:
            return f"e[{self.source.label}]"
        return "".join(a.label for a in reversed(self.arrows))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Relation:
    """Порождающее соотношение: нулевой путь или разность двух путей."""

    rule: str
    paths: tuple[Path, ...]

    @property
    def kind(self) -> str:
        return "zero" if len(self.paths) == 1 else "comm"

    @property
    def source(self) -> Vertex:
        return self.paths[0].source

    @property
    def target(self) -> Vertex:
        return self.paths[0].target

    def __str__(self) -> str:
        if self.kind == "zero":
            return f"{self.rule}: {self.paths[0].label} = 0"
        return f"{self.rule}: {self.paths[0].label} = {self.paths[1].label}"


class PartialMap(Mapping):
    """Инъективное частичное отображение конечного множества."""

    __slots__ = ("_data", "_name")

    def __init__(self, items: Mapping | Iterable[tuple[Any, Any]] = (), name: str = "map") -> None:
        data = dict(items)
        seen: dict[Hashable, Hashable] = {}
        for key, value in data.items():
            if value in seen:
                raise StructureError(
                    f"Отображение {name} не инъективно: {seen[value]} и {key} -> {value}"
                )
            seen[value] = key
        self._data = data
        self._name = name

    def __getitem__(self, key: Any) -> Any:
        return self._data[key]

    def __iter__(self) -> Iterator:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __hash__(self) -> int:
        return hash(frozenset(self._data.items()))

    def __call__(self, key: Any) -> Any:
        """Значение или None, если отображение не определено."""
        return self._data.get(key)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}->{v}" for k, v in sorted(self._data.items(), key=_sort_key))
        return f"{self._name}{{{body}}}"

    @property
    def name(self) -> str:
        return self._name

    @property
    def domain(self) -> frozenset:
        return frozenset(self._data)

    @property
    def image(self) -> frozenset:
        return frozenset(self._data.values())

    def inverse(self) -> "PartialMap":
        return PartialMap(((v, k) for k, v in self._data.items()), name=f"{self._name}⁻")

    def compose(self, inner: "PartialMap") -> "PartialMap":
        """self ∘ inner там, где композиция определена."""
        return PartialMap(
            ((k, self._data[v]) for k, v in inner.items() if v in self._data),
            name=f"{self._name}{inner.name}",
        )

    def restrict(self, keys: Iterable) -> "PartialMap":
        keys = set(keys)
        return PartialMap(((k, v) for k, v in self._data.items() if k in keys), name=self._name)

    def extended(self, key: Any, value: Any) -> "PartialMap":
        if key in self._data:
            raise StructureError(f"Отображение {self._name} уже определено в {key}")
        data = dict(self._data)
        data[key] = value
        return PartialMap(data, name=self._name)


def _sort_key(item: Any) -> tuple:
    # Индексы разных типов сравниваем по имени типа, затем по значению
    key = item[0] if isinstance(item, tuple) else item
    return (type(key).__name__, key)


def sorted_indices(values: Iterable) -> list:
    """Детерминированный порядок индексов для отчётов."""
    return sorted(values, key=lambda v: (type(v).__name__, v))
