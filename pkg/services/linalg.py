"""Точная линейная алгебра над QQ поверх sympy DomainMatrix."""
from __future__ import annotations

from collections.abc import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = list


def matrix(rows: Sequence[Sequence], nrows: int, ncols: int) -> DomainMatrix:
    """Плотная матрица nrows × ncols над QQ."""
    return DomainMatrix([[QQ(v) for v in row] for row in rows], (nrows, ncols), QQ)


def zeros(nrows: int, ncols: int) -> DomainMatrix:
    return matrix([[0] * ncols for _ in range(nrows)], nrows, ncols)


def identity(n: int) -> DomainMatrix:
    return matrix([[1 if r == c else 0 for c in range(n)] for r in range(n)], n, n)


def from_columns(columns: Sequence[Sequence], nrows: int) -> DomainMatrix:
    return matrix([[col[r] for col in columns] for r in range(nrows)], nrows, len(columns))


def entries(m: DomainMatrix) -> list[list]:
    nrows, ncols = m.shape
    if nrows == 0:
        return []
    if ncols == 0:
        return [[] for _ in range(nrows)]
    return m.to_list()


def columns(m: DomainMatrix) -> list[Vector]:
    rows = entries(m)
    return [[row[c] for row in rows] for c in range(m.shape[1])]


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"Несогласованные размеры: {a.shape} и {b.shape}")
    if 0 in (a.shape[0], a.shape[1], b.shape[1]):
        return zeros(a.shape[0], b.shape[1])
    return a.matmul(b)


def apply(m: DomainMatrix, v: Sequence) -> Vector:
    """Произведение матрицы на вектор-столбец."""
    return [sum((row[c] * v[c] for c in range(len(v))), QQ.zero) for row in entries(m)]


def is_zero(m: DomainMatrix) -> bool:
    return all(v == 0 for row in entries(m) for v in row)


def flatten(m: DomainMatrix) -> Vector:
    return [v for row in entries(m) for v in row]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[Vector], tuple[int, ...]]:
    """Ненулевые строки приведённого ступенчатого вида и столбцы ведущих элементов."""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = matrix(rows, len(rows), ncols).rref()
    return entries(reduced)[: len(pivots)], tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Базис {v : M v = 0}, по одному вектору на свободный столбец."""
    reduced, pivots = rref(rows, ncols)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [QQ.zero] * ncols
        v[free] = QQ.one
        for row, pivot in zip(reduced, pivots):
            v[pivot] = -row[free]
        basis.append(v)
    return basis


class Subspace:
    """Подпространство QQ^ambient, хранимое в приведённом ступенчатом виде."""

    def __init__(self, vectors: Sequence[Sequence], ambient: int) -> None:
        self.ambient = ambient
        self.basis, self.pivots = rref([list(v) for v in vectors], ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> Vector:
        """Остаток v по модулю подпространства."""
        w = [QQ(c) for c in v]
        for row, pivot in zip(self.basis, self.pivots):
            c = w[pivot]
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        return w

    def contains(self, v: Sequence) -> bool:
        return all(c == 0 for c in self.reduce(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Координаты вектора из подпространства в ступенчатом базисе."""
        return [QQ(v[p]) for p in self.pivots]

    def complement(self) -> list[int]:
        """Неведущие столбцы: координаты факторпространства."""
        return [c for c in range(self.ambient) if c not in self.pivots]

    def annihilator(self) -> "Subspace":
        """Функционалы, обнуляющиеся на подпространстве."""
        return Subspace(nullspace(self.basis, self.ambient), self.ambient)
