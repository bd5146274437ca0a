"""Алгебра связанного колчана над QQ: базис, проективные модули, τ, Ext¹, модули X и R, проверка лемм."""
from __future__ import annotations

import dataclasses
import logging
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property, lru_cache

import networkx as nx
from sympy import QQ

from services import linalg
from services import representations as rep
from services.correspondence import admissible_lemma, derive_structure, extend_ds
from services.defining_system import DefiningSystem, is_fundamental, serialize
from services.errors import BudgetExceeded, DomainError, InternalError
from services.linalg import Subspace
from services.models import Arrow, Path, Vertex, sorted_indices, x, z
from services.navigation import navigator
from services.quiver import BoundQuiver, build_quiver
from services.representations import ModuleMap, Representation

logger = logging.getLogger(__name__)

Word = tuple[Arrow, ...]

LEMMAS = ("tau", "ext", "homx", "homrx", "homr", "lfund", "onept", "paths")


class AlgebraBasis:
    """
    Нормальные формы путей по модулю соотношений.

    Нулевые соотношения стирают слова, содержащие их как подслово;
    слово из стрелок α в R4 переписывается в ξγα. К системе добавлены
    нулевые слова γ_{i,p_i+j} ξ_{i,j} γ_{i,T} α_{i,T} для p_i + j ∈ S_i.
    """

    def __init__(self, bq: BoundQuiver) -> None:
        self.quiver = bq
        self.zero_words: set[Word] = set()
        self.rules: dict[Word, Word] = {}
        for relation in bq.relations:
            if relation.kind == "zero":
                self.zero_words.add(relation.paths[0].arrows)
            else:
                via_z, down = relation.paths
                self.rules[down.arrows] = via_z.arrows
        self.zero_words.update(self._completion_words())

        self._by_last: dict[Arrow, list[Word]] = defaultdict(list)
        for left in self._lefts():
            self._by_last[left[-1]].append(left)
        self.check_confluence()

    def _completion_words(self) -> Iterable[Word]:
        ds = self.quiver.system
        if ds is None:
            return []
        words = []
        for i in ds.branches():
            p, S = ds.p_at(i), ds.S_at(i)
            for j, t in enumerate(ds.T_at(i), start=1):
                if p + j in S:
                    words.append(
                        (
                            self.quiver.arrow("gamma", i, p + j),
                            self.quiver.arrow("xi", i, j),
                            self.quiver.arrow("gamma", i, t),
                            self.quiver.arrow("alpha", i, t),
                        )
                    )
        return words

    def _lefts(self) -> list[Word]:
        return sorted(self.zero_words) + sorted(self.rules)

    def _rewrite_at(self, word: Word, pos: int, left: Word) -> Word | None:
        if left in self.zero_words:
            return None
        return word[:pos] + self.rules[left] + word[pos + len(left) :]

    def normal_form(self, word: Word) -> Word | None:
        """Нормальная форма слова или None, если слово равно нулю."""
        changed = True
        while changed:
            changed = False
            for end in range(1, len(word) + 1):
                for left in self._by_last.get(word[end - 1], ()):
                    start = end - len(left)
                    if start >= 0 and word[start:end] == left:
                        rewritten = self._rewrite_at(word, start, left)
                        if rewritten is None:
                            return None
                        word = rewritten
                        changed = True
                        break
                if changed:
                    break
        return word

    def check_confluence(self) -> None:
        """Проверяет разрешимость всех критических пар."""
        lefts = self._lefts()
        for first in lefts:
            for second in lefts:
                pairs = []
                for k in range(1, min(len(first), len(second))):
                    if first[-k:] == second[:k]:
                        pairs.append((first + second[k:], len(first) - k))
                if len(second) < len(first):
                    for pos in range(len(first) - len(second) + 1):
                        if first[pos : pos + len(second)] == second:
                            pairs.append((first, pos))
                for word, pos in pairs:
                    one = self._rewrite_at(word, 0, first)
                    two = self._rewrite_at(word, pos, second)
                    one = None if one is None else self.normal_form(one)
                    two = None if two is None else self.normal_form(two)
                    if one != two:
                        names = " ".join(a.name for a in word)
                        raise InternalError(f"Критическая пара не разрешается на слове {names}")

    @cached_property
    def paths_from(self) -> dict[Vertex, list[Word]]:
        """Все нормальные формы с началом в каждой вершине."""
        result = {}
        for v in self.quiver.vertices:
            found: list[Word] = [()]
            stack: list[tuple[Vertex, Word]] = [(v, ())]
            while stack:
                end, word = stack.pop()
                for arrow in self.quiver.outgoing(end):
                    extended = word + (arrow,)
                    if self._reducible_suffix(extended):
                        continue
                    found.append(extended)
                    stack.append((arrow.target, extended))
            result[v] = sorted(found, key=lambda w: (len(w), w))
        return result

    def _reducible_suffix(self, word: Word) -> bool:
        for left in self._by_last.get(word[-1], ()):
            if len(left) <= len(word) and word[len(word) - len(left) :] == left:
                return True
        return False

    @cached_property
    def between(self) -> dict[tuple[Vertex, Vertex], list[Word]]:
        table: dict[tuple[Vertex, Vertex], list[Word]] = defaultdict(list)
        for v, words in self.paths_from.items():
            for word in words:
                table[(v, word[-1].target if word else v)].append(word)
        return table

    @cached_property
    def index(self) -> dict[tuple[Vertex, Vertex], dict[Word, int]]:
        return {key: {w: k for k, w in enumerate(words)} for key, words in self.between.items()}

    def words(self, source: Vertex, target: Vertex) -> list[Word]:
        return self.between.get((source, target), [])

    @property
    def dimension(self) -> int:
        return sum(len(words) for words in self.paths_from.values())


@lru_cache(maxsize=64)
def algebra_basis(ds: DefiningSystem) -> AlgebraBasis:
    basis = AlgebraBasis(build_quiver(ds))
    logger.debug(f"Базис алгебры {serialize(ds)}: размерность {basis.dimension}")
    return basis


def count_paths(bq: BoundQuiver) -> int:
    """Число всех путей колчана, включая тривиальные."""
    from_vertex: dict[Vertex, int] = {}
    for v in reversed(list(nx.topological_sort(bq.graph))):
        from_vertex[v] = 1 + sum(from_vertex[a.target] for a in bq.outgoing(v))
    return sum(from_vertex.values())


def _all_paths(bq: BoundQuiver) -> list[Path]:
    paths = []
    stack = [Path(v) for v in bq.vertices]
    while stack:
        path = stack.pop()
        paths.append(path)
        for arrow in bq.outgoing(path.target):
            stack.append(Path(path.source, path.arrows + (arrow,)))
    return paths


def algebra_dim_oracle(ds: DefiningSystem, max_paths: int | None = None) -> int:
    """Размерность алгебры как факторпространства всех путей по идеалу соотношений."""
    bq = build_quiver(ds)
    total = count_paths(bq)
    if max_paths is not None and total > max_paths:
        raise BudgetExceeded(f"Число путей {total} превышает бюджет {max_paths}")

    paths = _all_paths(bq)
    ending: dict[Vertex, list[Path]] = defaultdict(list)
    starting: dict[Vertex, list[Path]] = defaultdict(list)
    groups: dict[tuple[Vertex, Vertex], dict[Word, int]] = defaultdict(dict)
    for path in paths:
        ending[path.target].append(path)
        starting[path.source].append(path)
        group = groups[(path.source, path.target)]
        group[path.arrows] = len(group)

    generators: dict[tuple[Vertex, Vertex], list[list]] = defaultdict(list)
    for relation in bq.relations:
        for before in ending[relation.source]:
            for after in starting[relation.target]:
                key = (before.source, after.target)
                group = groups[key]
                row = [0] * len(group)
                for sign, path in zip((1, -1), relation.paths):
                    row[group[before.arrows + path.arrows + after.arrows]] += sign
                generators[key].append(row)

    ideal = sum(linalg.rank(rows, len(groups[key])) for key, rows in generators.items())
    return total - ideal


@dataclass(frozen=True, eq=False)
class ProjectiveSum:
    """Прямая сумма P(v_1) ⊕ … ⊕ P(v_k) на нормальных формах."""

    basis: AlgebraBasis
    tops: tuple[Vertex, ...]

    @cached_property
    def coords(self) -> dict[Vertex, list[tuple[int, Word]]]:
        return {
            w: [(k, word) for k, top in enumerate(self.tops) for word in self.basis.words(top, w)]
            for w in self.basis.quiver.vertices
        }

    @cached_property
    def position(self) -> dict[Vertex, dict[tuple[int, Word], int]]:
        return {w: {c: n for n, c in enumerate(cs)} for w, cs in self.coords.items()}

    @cached_property
    def module(self) -> Representation:
        bq = self.basis.quiver
        dims = {w: len(self.coords[w]) for w in bq.vertices}
        maps = {}
        for a in bq.arrows:
            rows = [[0] * dims[a.source] for _ in range(dims[a.target])]
            for col, (k, word) in enumerate(self.coords[a.source]):
                image = self.basis.normal_form(word + (a,))
                if image is not None:
                    rows[self.position[a.target][(k, image)]][col] = 1
            maps[a] = linalg.matrix(rows, dims[a.target], dims[a.source])
        return Representation(bq, dims, maps)


def projective(ds: DefiningSystem, v: Vertex) -> Representation:
    return ProjectiveSum(algebra_basis(ds), (v,)).module


@dataclass(frozen=True, eq=False)
class ProjectiveCover:
    """Накрытие π: P0 → M, сизигия ΩM и её вложение ι в P0."""

    module: Representation
    p0: ProjectiveSum
    generators: tuple[tuple[Vertex, list], ...]
    pi: ModuleMap
    syzygy: Representation
    iota: ModuleMap


def top_generators(m: Representation) -> list[tuple[Vertex, list]]:
    """Векторы, дополняющие радикал до всего модуля, по вершинам."""
    result = []
    for v in m.quiver.vertices:
        size = m.dims[v]
        if not size:
            continue
        radical = Subspace(
            [col for a in m.quiver.incoming(v) for col in linalg.columns(m.maps[a])], size
        )
        for c in radical.complement():
            result.append((v, [1 if k == c else 0 for k in range(size)]))
    return result


def projective_cover(basis: AlgebraBasis, m: Representation) -> ProjectiveCover:
    generators = top_generators(m)
    p0 = ProjectiveSum(basis, tuple(v for v, _ in generators))
    pi = {}
    for w in basis.quiver.vertices:
        cols = [
            linalg.apply(m.path_map(Path(p0.tops[k], word)), generators[k][1])
            for k, word in p0.coords[w]
        ]
        pi[w] = linalg.from_columns(cols, m.dims[w]) if cols else linalg.zeros(m.dims[w], 0)
    kernels = {
        w: Subspace(linalg.nullspace(linalg.entries(pi[w]), len(p0.coords[w])), len(p0.coords[w]))
        for w in basis.quiver.vertices
    }
    syzygy, iota = rep.subrepresentation(p0.module, kernels)
    return ProjectiveCover(m, p0, tuple(generators), pi, syzygy, iota)


@dataclass(frozen=True, eq=False)
class Presentation:
    """Минимальная проективная копредставление P1 → P0 → M → 0."""

    cover: ProjectiveCover
    p1_tops: tuple[Vertex, ...]
    # образ образующей k-го слагаемого P1 в P0: {(l, путь): коэффициент}
    relations: tuple[dict[tuple[int, Word], object], ...]

    @property
    def p0_tops(self) -> tuple[Vertex, ...]:
        return self.cover.p0.tops


def min_proj_presentation(basis: AlgebraBasis, m: Representation) -> Presentation:
    cover = projective_cover(basis, m)
    relations = []
    tops = []
    for v, vector in top_generators(cover.syzygy):
        element = linalg.apply(cover.iota[v], vector)
        relations.append(
            {coord: c for coord, c in zip(cover.p0.coords[v], element) if c != 0}
        )
        tops.append(v)
    return Presentation(cover, tuple(tops), tuple(relations))


@dataclass(frozen=True, eq=False)
class TauResult:
    module: Representation
    projective: bool = False


def tau(basis: AlgebraBasis, m: Representation) -> TauResult:
    """τM = D Coker Hom(f, A) для минимального копредставления f: P1 → P0."""
    presentation = min_proj_presentation(basis, m)
    bq = basis.quiver
    if not presentation.p1_tops:
        return TauResult(rep.zero_module(bq), projective=True)

    v1_coords = {
        w: [(k, word) for k, top in enumerate(presentation.p1_tops) for word in basis.words(w, top)]
        for w in bq.vertices
    }
    v1_index = {w: {c: n for n, c in enumerate(cs)} for w, cs in v1_coords.items()}

    annihilators: dict[Vertex, Subspace] = {}
    for w in bq.vertices:
        size = len(v1_coords[w])
        images = []
        for l, top in enumerate(presentation.p0_tops):
            for g in basis.words(w, top):
                vector = [QQ.zero] * size
                for k, element in enumerate(presentation.relations):
                    for (source, word), c in element.items():
                        if source != l:
                            continue
                        product = basis.normal_form(g + word)
                        if product is not None:
                            vector[v1_index[w][(k, product)]] += c
                images.append(vector)
        annihilators[w] = Subspace(images, size).annihilator()

    dims = {w: annihilators[w].dim for w in bq.vertices}
    maps = {}
    for a in bq.arrows:
        source_space, target_space = annihilators[a.source], annihilators[a.target]
        cols = []
        for functional in source_space.basis:
            pulled = []
            for k, word in v1_coords[a.target]:
                product = basis.normal_form((a,) + word)
                pulled.append(
                    QQ.zero if product is None else functional[v1_index[a.source][(k, product)]]
                )
            if not target_space.contains(pulled):
                raise InternalError(f"τ: стрелка {a.name} не сохраняет аннулятор")
            cols.append(target_space.coordinates(pulled))
        maps[a] = (
            linalg.from_columns(cols, dims[a.target]) if cols else linalg.zeros(dims[a.target], 0)
        )
    return TauResult(Representation(bq, dims, maps))


@dataclass(frozen=True, eq=False)
class ExtensionData:
    """Ext¹(M, N) через сизигию и коцикл вне образа ограничений."""

    cover: ProjectiveCover
    dimension: int
    cocycle: ModuleMap | None


def _ext_data(basis: AlgebraBasis, m: Representation, n: Representation) -> ExtensionData:
    cover = projective_cover(basis, m)
    vertices = basis.quiver.vertices
    cocycles = rep.hom_space(cover.syzygy, n)

    restrictions = []
    for l, top in enumerate(cover.p0.tops):
        for r in range(n.dims[top]):
            unit = [1 if k == r else 0 for k in range(n.dims[top])]
            g = {}
            for w in vertices:
                cols = [
                    linalg.apply(n.path_map(Path(top, word)), unit)
                    if k == l
                    else [0] * n.dims[w]
                    for k, word in cover.p0.coords[w]
                ]
                g[w] = linalg.from_columns(cols, n.dims[w]) if cols else linalg.zeros(n.dims[w], 0)
            restrictions.append(rep.flatten_map(rep.compose(g, cover.iota), vertices))

    width = sum(n.dims[w] * cover.syzygy.dims[w] for w in vertices)
    restricted_rank = linalg.rank(restrictions, width)
    dimension = len(cocycles) - restricted_rank
    cocycle = None
    for h in cocycles:
        if linalg.rank(restrictions + [rep.flatten_map(h, vertices)], width) > restricted_rank:
            cocycle = h
            break
    return ExtensionData(cover, dimension, cocycle)


def ext1_dim(basis: AlgebraBasis, m: Representation, n: Representation) -> int:
    return _ext_data(basis, m, n).dimension


@dataclass(frozen=True, eq=False)
class Extension:
    """Короткая точная последовательность 0 → N → E → M → 0."""

    middle: Representation
    inclusion: ModuleMap
    projection: ModuleMap
    nonsplit: bool


def nonsplit_extension(basis: AlgebraBasis, m: Representation, n: Representation) -> Extension:
    """Средний член расширения, отвечающего ненулевому классу Ext¹(M, N)."""
    data = _ext_data(basis, m, n)
    if data.cocycle is None:
        raise InternalError("Ext¹(M, N) = 0: нерасщепимого расширения нет")
    cover, h = data.cover, data.cocycle
    bq = basis.quiver
    total = rep.direct_sum(n, cover.p0.module)

    pushout = {}
    for w in bq.vertices:
        h_cols, i_cols = linalg.columns(h[w]), linalg.columns(cover.iota[w])
        pushout[w] = Subspace(
            [hc + [-c for c in ic] for hc, ic in zip(h_cols, i_cols)], total.dims[w]
        )
    middle, to_middle = rep.quotient(total, pushout)

    inclusion, projection = {}, {}
    for w in bq.vertices:
        n_dim = n.dims[w]
        inclusion[w] = linalg.from_columns(
            linalg.columns(to_middle[w])[:n_dim], middle.dims[w]
        ) if n_dim else linalg.zeros(middle.dims[w], 0)
        pi_cols = linalg.columns(cover.pi[w])
        cols = [
            [0] * m.dims[w] if c < n_dim else pi_cols[c - n_dim] for c in pushout[w].complement()
        ]
        projection[w] = linalg.from_columns(cols, m.dims[w]) if cols else linalg.zeros(m.dims[w], 0)

    return Extension(middle, inclusion, projection, not _has_section(m, middle, projection))


def _has_section(m: Representation, middle: Representation, projection: ModuleMap) -> bool:
    """Есть ли s: M → E с projection ∘ s = id_M."""
    vertices = m.quiver.vertices
    candidates = [
        rep.flatten_map(rep.compose(projection, s), vertices) for s in rep.hom_space(m, middle)
    ]
    width = sum(d * d for d in m.dims.values())
    identity = rep.flatten_map({v: linalg.identity(m.dims[v]) for v in vertices}, vertices)
    base = linalg.rank(candidates, width)
    return linalg.rank(candidates + [identity], width) == base


class AlgebraContext:
    """Модули X_x, R_x и τ для одной системы; результаты кешируются."""

    def __init__(self, ds: DefiningSystem) -> None:
        self.ds = ds
        self.basis = algebra_basis(ds)
        self.quiver = self.basis.quiver
        self.nav = navigator(ds)
        self.structure = derive_structure(ds).structure
        self._x: dict[Vertex, Representation] = {}
        self._r: dict[Vertex, Extension] = {}
        self._tau: dict[Vertex, TauResult] = {}

    def X(self, v: Vertex) -> Representation:
        if v not in self.structure.I:
            raise DomainError(f"Индекс {v} не лежит в I")
        if v not in self._x:
            maps = self.nav.maps
            if v.kind == "x":
                path = self.nav.nu(v)
            else:
                path = self.nav.omega(maps.P[maps.S[v]])
            module = rep.string_module(self.quiver, path)
            if rep.hom_dim(module, module) != 1:
                raise InternalError(f"End(X_{v}) не одномерно")
            self._x[v] = module
        return self._x[v]

    def R_extension(self, v: Vertex) -> Extension:
        if v not in self.structure.phi:
            raise DomainError(f"R определено только на Dom φ, получено {v}")
        if v not in self._r:
            m, n = self.X(self.structure.phi[v]), self.X(v)
            dimension = ext1_dim(self.basis, m, n)
            if dimension != 1:
                raise InternalError(f"dim Ext¹(X_φ{v}, X_{v}) = {dimension}, ожидалось 1")
            self._r[v] = nonsplit_extension(self.basis, m, n)
        return self._r[v]

    def R(self, v: Vertex) -> Representation:
        return self.R_extension(v).middle

    def tau_of(self, m_index: Vertex) -> TauResult:
        if m_index not in self._tau:
            self._tau[m_index] = tau(self.basis, self.X(m_index))
        return self._tau[m_index]


@lru_cache(maxsize=16)
def algebra_context(ds: DefiningSystem) -> AlgebraContext:
    return AlgebraContext(ds)


def X(ds: DefiningSystem, v: Vertex) -> Representation:
    return algebra_context(ds).X(v)


def R(ds: DefiningSystem, v: Vertex) -> Representation:
    return algebra_context(ds).R(v)


def new_vertex(ds: DefiningSystem, y: Vertex) -> Vertex:
    """Вершина, которую добавляет расширение по y."""
    if y.kind == "x":
        return z(y.i, y.j + 1)
    return x(y.i, ds.top(y.i) + 1)


def one_point_extension_check(ds: DefiningSystem, y: Vertex) -> bool:
    """Радикал проективного модуля новой вершины, ограниченный на Q, изоморфен R_y."""
    step = extend_ds(ds, y)
    extended = algebra_basis(step.system)
    fresh = new_vertex(ds, y)
    if extended.quiver.incoming(fresh):
        raise InternalError(f"Новая вершина {fresh} не является источником")
    big = ProjectiveSum(extended, (fresh,)).module
    bq = build_quiver(ds)
    restricted = Representation(
        bq,
        {v: big.dims[v] for v in bq.vertices},
        {a: big.maps[a] for a in bq.arrows},
    )
    return rep.is_isomorphic(restricted, R(ds, y))


@dataclass(frozen=True)
class Mismatch:
    lemma: str
    witness: str
    expected: object
    actual: object

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "witness": self.witness,
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass
class LemmaReport:
    system: str
    field: str = "QQ"
    skipped: str | None = None
    counts: dict[str, dict[str, int]] = dataclasses.field(default_factory=dict)
    mismatches: list[Mismatch] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def record(self, lemma: str, witness: str, expected: object, actual: object) -> None:
        stats = self.counts.setdefault(lemma, {"checked": 0, "passed": 0})
        stats["checked"] += 1
        if expected == actual:
            stats["passed"] += 1
        else:
            self.mismatches.append(Mismatch(lemma, witness, expected, actual))

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "field": self.field,
            "skipped": self.skipped,
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
            "mismatches": [m.to_dict() for m in self.mismatches],
            "ok": self.ok,
        }


def _r_orbit(maps, v: Vertex) -> set[Vertex]:
    orbit = {v}
    while v in maps.R_inv:
        v = maps.R_inv[v]
        orbit.add(v)
    return orbit


def _check_tau(ctx: AlgebraContext, report: LemmaReport) -> None:
    cs = ctx.structure
    for v in sorted_indices(cs.phi.domain):
        translated = ctx.tau_of(cs.phi[v]).module
        target = ctx.X(v)
        same = translated.dim_vector == target.dim_vector and rep.is_isomorphic(translated, target)
        report.record("tau", f"x={v}", True, same)


def _check_ext(ctx: AlgebraContext, report: LemmaReport) -> None:
    cs = ctx.structure
    for v in sorted_indices(cs.phi.domain):
        m, n = ctx.X(cs.phi[v]), ctx.X(v)
        dimension = ext1_dim(ctx.basis, m, n)
        report.record("ext", f"dim Ext¹(X_φ{v}, X_{v})", 1, dimension)
        if dimension != 1:
            continue
        extension = ctx.R_extension(v)
        report.record("ext", f"nonsplit R_{v}", True, extension.nonsplit)
        dims_ok = all(
            extension.middle.dims[w] == m.dims[w] + n.dims[w] for w in ctx.quiver.vertices
        )
        report.record("ext", f"dim R_{v}", True, dims_ok)


def _homx_expected(ctx: AlgebraContext, y: Vertex, v: Vertex) -> int | None:
    """Ожидаемое dim Hom(X_y, X_v) или None, если y не подходит ни под один случай."""
    nav, maps = ctx.nav, ctx.nav.maps
    if y.kind == "x":
        if nav.nu(y).source in maps.image_PS:
            return None
        return int(v.kind == "x" and v in _r_orbit(maps, y))
    top = ctx.ds.top(y.i)
    if y in maps.T.image or nav.h(maps.S[y]) != top:
        return None
    return int(v.kind == "z" and v.i == y.i and y.j <= v.j <= top)


def _check_homx(ctx: AlgebraContext, report: LemmaReport) -> None:
    indices = sorted_indices(ctx.structure.I)
    for y in indices:
        for v in indices:
            expected = _homx_expected(ctx, y, v)
            if expected is None:
                break
            actual = rep.hom_dim(ctx.X(y), ctx.X(v))
            report.record("homx", f"Hom(X_{y}, X_{v})", expected, actual)


def _homrx_expected(ctx: AlgebraContext, y: Vertex, v: Vertex) -> int:
    nav = ctx.nav
    if y.kind == "x":
        return int(v.kind == "x" and nav.nu(v).source == x(y.i, y.j + 1))
    if v.kind == "x":
        return int(nav.nu(v).source == y)
    return int(v.i == y.i and y.j + 1 <= v.j <= ctx.ds.top(y.i))


def _check_homrx(ctx: AlgebraContext, admissible: list[Vertex], report: LemmaReport) -> None:
    for y in admissible:
        for v in sorted_indices(ctx.structure.I):
            actual = rep.hom_dim(ctx.R(y), ctx.X(v))
            report.record("homrx", f"Hom(R_{y}, X_{v})", _homrx_expected(ctx, y, v), actual)


def _check_homr(ctx: AlgebraContext, admissible: list[Vertex], report: LemmaReport) -> None:
    cs = ctx.structure
    for y in admissible:
        for v in sorted_indices(cs.phi.domain):
            if v == y:
                continue
            actual = rep.hom_dim(ctx.R(y), ctx.X(cs.phi[v]))
            report.record("homr", f"Hom(R_{y}, X_φ{v})", 0, actual)


def _check_lfund(ctx: AlgebraContext, report: LemmaReport) -> None:
    cs = ctx.structure
    for v in sorted_indices(cs.I):
        translated = tau(ctx.basis, ctx.X(v)).module
        report.record("lfund", f"l_{v}", cs.l[v], 1 - translated.total_dim)


def _check_onept(ctx: AlgebraContext, admissible: list[Vertex], report: LemmaReport) -> None:
    for y in admissible:
        report.record("onept", f"rad P'({new_vertex(ctx.ds, y)}) ≅ R_{y}", True,
                      one_point_extension_check(ctx.ds, y))


def string_paths(ds: DefiningSystem) -> list[Path]:
    """Пути ν_x, ω_x, μ_x, стрелки и тривиальные пути без повторов."""
    nav = navigator(ds)
    bq = nav.bq
    paths = {Path(v) for v in bq.vertices}
    paths.update(Path(a.source, (a,)) for a in bq.arrows)
    for v in nav.classes.x_all:
        paths.update((nav.nu(v), nav.mu(v), nav.omega(v)))
    return sorted(paths, key=lambda p: (p.source, p.arrows))


def _check_paths(ctx: AlgebraContext, report: LemmaReport) -> None:
    paths = string_paths(ctx.ds)
    modules = [rep.string_module(ctx.quiver, p) for p in paths]
    for first, m in zip(paths, modules):
        for second, n in zip(paths, modules):
            report.record(
                "paths",
                f"Hom(M({first.label}), M({second.label}))",
                rep.hom_dim_paths(first, second),
                rep.hom_dim(m, n),
            )


def verify_lemmas(
    ds: DefiningSystem, lemmas: Iterable[str] | None = None, budget: int | None = None
) -> LemmaReport:
    """Проверяет утверждения о модулях X, R и τ точной линейной алгеброй."""
    selected = tuple(lemmas) if lemmas is not None else LEMMAS
    unknown = sorted(set(selected) - set(LEMMAS))
    if unknown:
        raise DomainError(f"Неизвестные леммы: {unknown}")

    report = LemmaReport(system=serialize(ds))
    basis = algebra_basis(ds)
    if budget is not None and basis.dimension > budget:
        report.skipped = f"размерность алгебры {basis.dimension} превышает бюджет {budget}"
        logger.info(f"Проверка {serialize(ds)} пропущена: {report.skipped}")
        return report

    ctx = algebra_context(ds)
    admissible = sorted_indices(admissible_lemma(ds))
    if "tau" in selected:
        _check_tau(ctx, report)
    if "ext" in selected:
        _check_ext(ctx, report)
    if "homx" in selected:
        _check_homx(ctx, report)
    if "homrx" in selected:
        _check_homrx(ctx, admissible, report)
    if "homr" in selected:
        _check_homr(ctx, admissible, report)
    if "lfund" in selected and is_fundamental(ds):
        _check_lfund(ctx, report)
    if "onept" in selected:
        _check_onept(ctx, admissible, report)
    if "paths" in selected:
        _check_paths(ctx, report)

    if report.mismatches:
        logger.warning(f"{serialize(ds)}: расхождений {len(report.mismatches)}")
    return report
