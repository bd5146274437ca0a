"""Связанный колчан определяющей системы и его экспорт."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from services.defining_system import DefiningSystem
from services.errors import DomainError
from services.models import Arrow, Path, Relation, Vertex, x, z

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundQuiver:
    """Колчан с соотношениями; вершины и стрелки в каноническом порядке."""

    vertices: tuple[Vertex, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[Relation, ...] = ()
    system: DefiningSystem | None = field(default=None, compare=False)

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            graph.add_edge(arrow.source, arrow.target, key=arrow.name, arrow=arrow)
        return graph

    @cached_property
    def _by_name(self) -> dict[tuple[str, int, int], Arrow]:
        return {(a.kind, a.i, a.j): a for a in self.arrows}

    @cached_property
    def _outgoing(self) -> dict[Vertex, tuple[Arrow, ...]]:
        out: dict[Vertex, list[Arrow]] = {v: [] for v in self.vertices}
        for arrow in self.arrows:
            out[arrow.source].append(arrow)
        return {v: tuple(arrows) for v, arrows in out.items()}

    @cached_property
    def _incoming(self) -> dict[Vertex, tuple[Arrow, ...]]:
        inc: dict[Vertex, list[Arrow]] = {v: [] for v in self.vertices}
        for arrow in self.arrows:
            inc[arrow.target].append(arrow)
        return {v: tuple(arrows) for v, arrows in inc.items()}

    def arrow(self, kind: str, i: int, j: int) -> Arrow:
        try:
            return self._by_name[(kind, i, j)]
        except KeyError:
            raise DomainError(f"В колчане нет стрелки {kind}_{i}_{j}") from None

    def outgoing(self, v: Vertex) -> tuple[Arrow, ...]:
        return self._outgoing.get(v, ())

    def incoming(self, v: Vertex) -> tuple[Arrow, ...]:
        return self._incoming.get(v, ())

    def path(self, source: Vertex, *names: tuple[str, int, int]) -> Path:
        return Path(source, tuple(self.arrow(*name) for name in names))

    def relation_counts(self) -> dict[str, int]:
        counts = {"R1": 0, "R2": 0, "R3": 0, "R4": 0}
        for relation in self.relations:
            counts[relation.rule] += 1
        return counts


def y_vertex(ds: DefiningSystem, i: int, j: int) -> Vertex:
    """Вершина y_{i,j} с отождествлениями y_{i,0} = x_{i+1,0} и y_{i,q_i} = x_{i,p_i}."""
    if j == 0:
        return x(ds.wrap(i + 1), 0)
    if j == ds.q_at(i):
        return x(i, ds.p_at(i))
    return Vertex("y", i, j)


def build_quiver(ds: DefiningSystem) -> BoundQuiver:
    """Строит колчан Q и порождающие соотношения R1-R4."""
    vertices: set[Vertex] = set()
    arrows: list[Arrow] = []

    for i in ds.branches():
        p, q, S, T = ds.p_at(i), ds.q_at(i), ds.S_at(i), ds.T_at(i)
        top = ds.top(i)
        vertices.update(x(i, j) for j in range(top + 1))
        vertices.update(Vertex("y", i, j) for j in range(1, q))
        vertices.update(z(i, j) for j in S)

        arrows.extend(Arrow("alpha", i, j, x(i, j), x(i, j - 1)) for j in range(1, top + 1))
        arrows.extend(
            Arrow("beta", i, j, y_vertex(ds, i, j), y_vertex(ds, i, j - 1)) for j in range(1, q + 1)
        )
        arrows.extend(Arrow("gamma", i, j, z(i, j), x(i, j)) for j in S)
        arrows.extend(
            Arrow("xi", i, k, x(i, p + k), z(i, t)) for k, t in enumerate(T, start=1)
        )

    arrows.sort()
    by_name = {(a.kind, a.i, a.j): a for a in arrows}

    def walk(source: Vertex, *names: tuple[str, int, int]) -> Path:
        return Path(source, tuple(by_name[name] for name in names))

    relations: list[Relation] = []
    for i in ds.branches():
        for j in ds.S_at(i):
            relations.append(
                Relation("R1", (walk(z(i, j), ("gamma", i, j), ("alpha", i, j), ("alpha", i, j - 1)),))
            )
    for i in ds.branches():
        p, q = ds.p_at(i), ds.q_at(i)
        if ds.T_at(i):
            relations.append(
                Relation("R2", (walk(x(i, p + 1), ("alpha", i, p + 1), ("beta", i, q)),))
            )
    for i in ds.branches():
        p = ds.p_at(i)
        for j in range(2, len(ds.T_at(i)) + 1):
            relations.append(
                Relation("R3", (walk(x(i, p + j), ("alpha", i, p + j), ("xi", i, j - 1)),))
            )
    for i in ds.branches():
        p = ds.p_at(i)
        for j, t in enumerate(ds.T_at(i), start=1):
            via_z = walk(x(i, p + j), ("xi", i, j), ("gamma", i, t), ("alpha", i, t))
            down = walk(x(i, p + j), *(("alpha", i, k) for k in range(p + j, t - 1, -1)))
            relations.append(Relation("R4", (via_z, down)))

    bq = BoundQuiver(tuple(sorted(vertices)), tuple(arrows), tuple(relations), ds)
    logger.debug(
        f"Колчан построен: {len(bq.vertices)} вершин, {len(bq.arrows)} стрелок, "
        f"{len(bq.relations)} соотношений"
    )
    return bq


def acyclicity_check(bq: BoundQuiver) -> bool:
    return nx.is_directed_acyclic_graph(bq.graph)


def export_dot(bq: BoundQuiver) -> str:
    """Экспорт в Graphviz DOT; соотношения записываются комментариями."""
    lines = ["digraph Q {", "  rankdir=LR;"]
    for relation in bq.relations:
        lines.append(f"  // {relation.rule} {relation.kind}: {_relation_words(relation)}")
    for v in bq.vertices:
        lines.append(f'  "{v}" [label="{v.label}"];')
    for a in bq.arrows:
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _relation_words(relation: Relation) -> str:
    return " - ".join(" ".join(a.name for a in path.arrows) for path in relation.paths)


def quiver_to_dict(bq: BoundQuiver) -> dict:
    return {
        "vertices": [str(v) for v in bq.vertices],
        "arrows": [
            {"name": a.name, "source": str(a.source), "target": str(a.target)} for a in bq.arrows
        ],
        "relations": [
            {
                "rule": r.rule,
                "kind": r.kind,
                "paths": [[a.name for a in path.arrows] for path in r.paths],
            }
            for r in bq.relations
        ],
    }


def export_json(bq: BoundQuiver) -> str:
    return json.dumps(quiver_to_dict(bq), indent=2, ensure_ascii=False) + "\n"
