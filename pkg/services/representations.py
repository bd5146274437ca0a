"""Представления связанного колчана: строковые модули, Hom, подмодули, факторы, изоморфизм."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from services import linalg
from services.errors import InternalError, RelationViolation
from services.linalg import Subspace
from services.models import Arrow, Path, Relation, Vertex
from services.quiver import BoundQuiver

logger = logging.getLogger(__name__)

ModuleMap = dict[Vertex, DomainMatrix]


@dataclass(frozen=True, eq=False)
class Representation:
    """Размерности по вершинам и матрица (dim target × dim source) на каждой стрелке."""

    quiver: BoundQuiver
    dims: Mapping[Vertex, int] = field(default_factory=dict)
    maps: Mapping[Arrow, DomainMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        dims = {v: int(self.dims.get(v, 0)) for v in self.quiver.vertices}
        maps = {}
        for a in self.quiver.arrows:
            shape = (dims[a.target], dims[a.source])
            m = self.maps.get(a)
            if m is None:
                m = linalg.zeros(*shape)
            elif m.shape != shape:
                raise InternalError(f"Матрица стрелки {a.name} имеет размер {m.shape}, ожидалось {shape}")
            maps[a] = m
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)

    @cached_property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def support(self) -> frozenset[Vertex]:
        return frozenset(v for v, d in self.dims.items() if d)

    def path_map(self, path: Path) -> DomainMatrix:
        result = linalg.identity(self.dims[path.source])
        for arrow in path.arrows:
            result = linalg.matmul(self.maps[arrow], result)
        return result

    def relation_violations(self) -> list[Relation]:
        violations = []
        for relation in self.quiver.relations:
            first = self.path_map(relation.paths[0])
            if relation.kind == "zero":
                if not linalg.is_zero(first):
                    violations.append(relation)
            elif linalg.entries(first) != linalg.entries(self.path_map(relation.paths[1])):
                violations.append(relation)
        return violations

    def check_relations(self) -> "Representation":
        violations = self.relation_violations()
        if violations:
            raise RelationViolation(violations)
        return self


def zero_module(bq: BoundQuiver) -> Representation:
    return Representation(bq)


def string_module(bq: BoundQuiver, path: Path) -> Representation:
    """Тонкий модуль M(τ): размерность 1 на вершинах пути, единицы на его стрелках."""
    dims = {v: 1 for v in path.vertices}
    maps = {a: linalg.identity(1) for a in path.arrows}
    return Representation(bq, dims, maps).check_relations()


def direct_sum(m: Representation, n: Representation) -> Representation:
    dims = {v: m.dims[v] + n.dims[v] for v in m.quiver.vertices}
    maps = {}
    for a in m.quiver.arrows:
        rows = [row + [0] * n.dims[a.source] for row in linalg.entries(m.maps[a])]
        rows += [[0] * m.dims[a.source] + row for row in linalg.entries(n.maps[a])]
        maps[a] = linalg.matrix(rows, dims[a.target], dims[a.source])
    return Representation(m.quiver, dims, maps)


def hom_space(m: Representation, n: Representation) -> list[ModuleMap]:
    """Базис Hom(M, N) как решения системы сплетающих уравнений."""
    offsets: dict[Vertex, int] = {}
    total = 0
    for v in m.quiver.vertices:
        offsets[v] = total
        total += n.dims[v] * m.dims[v]

    def index(v: Vertex, r: int, c: int) -> int:
        return offsets[v] + r * m.dims[v] + c

    equations = []
    for a in m.quiver.arrows:
        s, t = a.source, a.target
        if not (m.dims[s] and n.dims[t]):
            continue
        n_a, m_a = linalg.entries(n.maps[a]), linalg.entries(m.maps[a])
        # N_a f_s - f_t M_a = 0
        for r in range(n.dims[t]):
            for c in range(m.dims[s]):
                row = [0] * total
                for k in range(n.dims[s]):
                    row[index(s, k, c)] += n_a[r][k]
                for k in range(m.dims[t]):
                    row[index(t, r, k)] -= m_a[k][c]
                equations.append(row)

    basis = []
    for vector in linalg.nullspace(equations, total):
        f = {}
        for v in m.quiver.vertices:
            rows, cols = n.dims[v], m.dims[v]
            start = offsets[v]
            f[v] = linalg.matrix(
                [vector[start + r * cols : start + (r + 1) * cols] for r in range(rows)], rows, cols
            )
        basis.append(f)
    return basis


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_space(m, n))


def is_module_map(f: ModuleMap, m: Representation, n: Representation) -> bool:
    for a in m.quiver.arrows:
        left = linalg.matmul(n.maps[a], f[a.source])
        right = linalg.matmul(f[a.target], m.maps[a])
        if linalg.entries(left) != linalg.entries(right):
            return False
    return True


def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """g ∘ f."""
    return {v: linalg.matmul(g[v], f[v]) for v in f}


def flatten_map(f: ModuleMap, vertices: tuple[Vertex, ...]) -> list:
    return [c for v in vertices for c in linalg.flatten(f[v])]


def hom_dim_paths(first: Path, second: Path) -> int:
    """1, если начальный отрезок first совпадает с конечным отрезком second."""
    if first.source == second.target:
        return 1
    for k in range(1, min(len(first), len(second)) + 1):
        if first.arrows[:k] == second.arrows[len(second) - k :]:
            return 1
    return 0


def is_isomorphic(m: Representation, n: Representation) -> bool:
    """Ищет обратимый гомоморфизм M → N; общий элемент Hom проверяется через определители."""
    if m.dim_vector != n.dim_vector:
        return False
    if m.total_dim == 0:
        return True
    basis = hom_space(m, n)
    if not basis:
        return False
    support = [v for v in m.quiver.vertices if m.dims[v]]

    if len(basis) == 1:
        f = basis[0]
        return all(linalg.rank(linalg.entries(f[v]), m.dims[v]) == m.dims[v] for v in support)

    coefficients = sympy.symbols(f"c0:{len(basis)}")
    for v in support:
        size = m.dims[v]
        generic = sympy.zeros(size, size)
        for c, f in zip(coefficients, basis):
            rows = linalg.entries(f[v])
            generic += c * sympy.Matrix(
                size, size, lambda r, k: QQ.to_sympy(rows[r][k])
            )
        if sympy.expand(generic.det(method="berkowitz")) == 0:
            return False
    return True


def subrepresentation(
    m: Representation, subspaces: Mapping[Vertex, Subspace]
) -> tuple[Representation, ModuleMap]:
    """Подмодуль по подпространствам в вершинах и его вложение в M."""
    dims = {v: subspaces[v].dim for v in m.quiver.vertices}
    inclusion = {
        v: linalg.from_columns(subspaces[v].basis, m.dims[v])
        if dims[v]
        else linalg.zeros(m.dims[v], 0)
        for v in m.quiver.vertices
    }
    maps = {}
    for a in m.quiver.arrows:
        target_space = subspaces[a.target]
        cols = []
        for b in subspaces[a.source].basis:
            image = linalg.apply(m.maps[a], b)
            if not target_space.contains(image):
                raise InternalError(f"Подпространства не замкнуты относительно стрелки {a.name}")
            cols.append(target_space.coordinates(image))
        maps[a] = (
            linalg.from_columns(cols, dims[a.target]) if cols else linalg.zeros(dims[a.target], 0)
        )
    return Representation(m.quiver, dims, maps), inclusion


def quotient(
    m: Representation, subspaces: Mapping[Vertex, Subspace]
) -> tuple[Representation, ModuleMap]:
    """Фактормодуль M/U и проекция M → M/U (координаты: неведущие столбцы U)."""
    keep = {v: subspaces[v].complement() for v in m.quiver.vertices}
    dims = {v: len(keep[v]) for v in m.quiver.vertices}

    def project(v: Vertex, vector: list) -> list:
        reduced = subspaces[v].reduce(vector)
        return [reduced[c] for c in keep[v]]

    def unit(size: int, c: int) -> list:
        return [1 if k == c else 0 for k in range(size)]

    projection = {}
    for v in m.quiver.vertices:
        cols = [project(v, unit(m.dims[v], c)) for c in range(m.dims[v])]
        projection[v] = (
            linalg.from_columns(cols, dims[v]) if cols else linalg.zeros(dims[v], 0)
        )
    maps = {}
    for a in m.quiver.arrows:
        cols = [
            project(a.target, linalg.apply(m.maps[a], unit(m.dims[a.source], c)))
            for c in keep[a.source]
        ]
        maps[a] = (
            linalg.from_columns(cols, dims[a.target]) if cols else linalg.zeros(dims[a.target], 0)
        )
    return Representation(m.quiver, dims, maps), projection
