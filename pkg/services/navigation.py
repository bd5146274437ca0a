"""Классы вершин, отображения 𝔓, ℜ, 𝔖, 𝔗 и пути ω, μ, ν."""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from functools import cached_property, lru_cache

from services.defining_system import DefiningSystem
from services.errors import DomainError, InternalError
from services.models import PartialMap, Path, Vertex, x, z
from services.quiver import BoundQuiver, build_quiver

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexClasses:
    """Разбиение вершин: 𝔵 = 𝔵₀ ∪ … ∪ 𝔵₄ (𝔵₂ и 𝔵₄ могут пересекаться) и 𝔷."""

    x_all: frozenset[Vertex]
    x0: frozenset[Vertex]
    x1: frozenset[Vertex]
    x2: frozenset[Vertex]
    x3: frozenset[Vertex]
    x4: frozenset[Vertex]
    z: frozenset[Vertex]


@dataclass(frozen=True)
class FrakturMaps:
    P: PartialMap
    R: PartialMap
    S: PartialMap
    T: PartialMap

    @cached_property
    def P_inv(self) -> PartialMap:
        return self.P.inverse()

    @cached_property
    def R_inv(self) -> PartialMap:
        return self.R.inverse()

    @cached_property
    def S_inv(self) -> PartialMap:
        return self.S.inverse()

    @cached_property
    def image_ST(self) -> frozenset[Vertex]:
        return self.S.compose(self.T).image

    @cached_property
    def image_PS(self) -> frozenset[Vertex]:
        return self.P.compose(self.S).image


def classify(ds: DefiningSystem) -> VertexClasses:
    x0, x1, x2, x3, x4, zs = set(), set(), set(), set(), set(), set()
    for i in ds.branches():
        p, top = ds.p_at(i), ds.top(i)
        x0.add(x(i, 0))
        x1.update(x(i, j) for j in range(1, p))
        x2.add(x(i, p))
        x3.update(x(i, j) for j in range(p + 1, top))
        x4.add(x(i, top))
        zs.update(z(i, j) for j in ds.S_at(i))
    return VertexClasses(
        x_all=frozenset(x0 | x1 | x2 | x3 | x4),
        x0=frozenset(x0),
        x1=frozenset(x1),
        x2=frozenset(x2),
        x3=frozenset(x3),
        x4=frozenset(x4),
        z=frozenset(zs),
    )


def fraktur(ds: DefiningSystem) -> FrakturMaps:
    P, R, S, T = {}, {}, {}, {}
    for i in ds.branches():
        p = ds.p_at(i)
        for j in range(1, ds.top(i) + 1):
            P[x(i, j)] = x(i, j - 1)
        R[x(i, p)] = x(ds.wrap(i + 1), 0)
        for k, t in enumerate(ds.T_at(i), start=1):
            R[x(i, p + k)] = x(i, t)
            T[x(i, p + k)] = z(i, t)
        for j in ds.S_at(i):
            S[z(i, j)] = x(i, j)
    return FrakturMaps(
        P=PartialMap(P, name="𝔓"),
        R=PartialMap(R, name="ℜ"),
        S=PartialMap(S, name="𝔖"),
        T=PartialMap(T, name="𝔗"),
    )


class Navigator:
    """Вычисляет ω, μ, ν для одной системы; результаты кешируются."""

    def __init__(self, ds: DefiningSystem, bq: BoundQuiver | None = None) -> None:
        self.ds = ds
        self.bq = bq or build_quiver(ds)
        self.classes = classify(ds)
        self.maps = fraktur(ds)
        self._mu: dict[Vertex, Path] = {}
        self._nu: dict[Vertex, Path] = {}
        # navigator() отдаёт общий экземпляр; μ и ν рекурсивны, поэтому RLock
        self._memo_lock = threading.RLock()

    def _require_x(self, v: Vertex) -> None:
        if v not in self.classes.x_all:
            raise DomainError(f"Вершина {v} не лежит в 𝔵")

    def h(self, v: Vertex) -> int:
        """h_x = p_i + #{k : T_{i,k} ≤ j}."""
        self._require_x(v)
        return self.ds.p_at(v.i) + sum(1 for t in self.ds.T_at(v.i) if t <= v.j)

    def omega(self, v: Vertex) -> Path:
        """Путь первого рода x_{i,h_x} → x."""
        top = self.h(v)
        if top < v.j:
            raise InternalError(f"h({v}) = {top} меньше индекса вершины")
        return self.bq.path(x(v.i, top), *(("alpha", v.i, k) for k in range(top, v.j, -1)))

    def gamma(self, v: Vertex) -> Path:
        """γ_x как путь z → x для x ∈ Im 𝔖."""
        source = self.maps.S_inv(v)
        if source is None:
            raise DomainError(f"Вершина {v} не лежит в Im 𝔖")
        return self.bq.path(source, ("gamma", v.i, v.j))

    def xi(self, v: Vertex) -> Path:
        """ξ_x как путь x → 𝔗x для x ∈ Dom 𝔗."""
        if v not in self.maps.T:
            raise DomainError(f"Вершина {v} не лежит в Dom 𝔗")
        return self.bq.path(v, ("xi", v.i, v.j - self.ds.p_at(v.i)))

    def mu(self, v: Vertex) -> Path:
        self._require_x(v)
        with self._memo_lock:
            if v not in self._mu:
                self._mu[v] = self._compute_mu(v)
            return self._mu[v]

    def _compute_mu(self, v: Vertex) -> Path:
        classes = self.classes
        if v in classes.x0 or v in classes.x1:
            return Path(v)
        if v in classes.x2:
            i, q = v.i, self.ds.q_at(v.i)
            return self.bq.path(v, *(("beta", i, k) for k in range(q, 0, -1)))
        r = self.maps.R[v]
        return self.xi(v).then(self.gamma(r)).then(self.mu(r))

    def nu(self, v: Vertex) -> Path:
        self._require_x(v)
        with self._memo_lock:
            if v not in self._nu:
                self._nu[v] = self._compute_nu(v)
            return self._nu[v]

    def _compute_nu(self, v: Vertex) -> Path:
        maps = self.maps
        if v in self.classes.x0:
            r = maps.R_inv[v]
            return self.nu(r).then(self.mu(r))
        if v in maps.image_ST:
            r = maps.R_inv[v]
            return self.nu(r).then(self.xi(r)).then(self.gamma(v))
        if v in maps.S.image:
            return self.gamma(v)
        return Path(v)

    def t_mu_closed(self, v: Vertex) -> Vertex:
        """t μ_x = ℜ^j x для наибольшего j, при котором ℜ^j x определено."""
        self._require_x(v)
        current = v
        while current in self.maps.R:
            current = self.maps.R[current]
        return current

    def s_nu_closed(self, v: Vertex) -> Vertex:
        """s ν_x = ℜ^{-j} x или 𝔖⁻ℜ^{-j} x для наибольшего допустимого j."""
        self._require_x(v)
        # Im ℜ = 𝔵₀ ∪ Im 𝔖𝔗
        current = v
        while current in self.maps.R_inv:
            current = self.maps.R_inv[current]
        return self.maps.S_inv(current) or current

    def maximal_second_kind_path(self, v: Vertex, outgoing: bool = True) -> Path:
        """Максимальный путь из стрелок второго рода, начинающийся (или кончающийся) в v."""
        arrows = []
        current = v
        while True:
            candidates = [
                a
                for a in (self.bq.outgoing(current) if outgoing else self.bq.incoming(current))
                if not a.first_kind
            ]
            if not candidates:
                break
            if len(candidates) > 1:
                raise InternalError(f"В вершине {current} больше одной стрелки второго рода")
            arrow = candidates[0]
            arrows.append(arrow)
            current = arrow.target if outgoing else arrow.source
        if outgoing:
            return Path(v, tuple(arrows))
        return Path(current, tuple(reversed(arrows)))


@lru_cache(maxsize=256)
def navigator(ds: DefiningSystem) -> Navigator:
    return Navigator(ds)


def h(ds: DefiningSystem, v: Vertex) -> int:
    return navigator(ds).h(v)


def omega(ds: DefiningSystem, v: Vertex) -> Path:
    return navigator(ds).omega(v)


def mu(ds: DefiningSystem, v: Vertex) -> Path:
    return navigator(ds).mu(v)


def nu(ds: DefiningSystem, v: Vertex) -> Path:
    return navigator(ds).nu(v)
