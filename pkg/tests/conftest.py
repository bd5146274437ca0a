import json

import pytest

from services.defining_system import DefiningSystem, EnumerationBounds, enumerate_systems

E1 = DefiningSystem(p=(6, 3), q=(2, 2), S=((2, 4, 6, 8), (2,)), T=((4, 6), ()))
SMALL_FUNDAMENTAL = DefiningSystem(p=(2, 1), q=(1, 1), S=((), ()), T=((), ()))
ONE_CYCLE = DefiningSystem(p=(2, 1), q=(1, 1), S=((2,), ()), T=((2,), ()))

# Быстрый перебор для обычного прогона; полный - под маркером slow
QUICK_SWEEP = tuple(enumerate_systems(EnumerationBounds(max_n=2, max_p=3, max_q=1, max_t=1)))
FULL_BOUNDS = EnumerationBounds(max_n=2, max_p=4, max_q=2, max_t=2)


@pytest.fixture
def e1() -> DefiningSystem:
    return E1


@pytest.fixture
def small_fundamental() -> DefiningSystem:
    return SMALL_FUNDAMENTAL


@pytest.fixture
def one_cycle() -> DefiningSystem:
    return ONE_CYCLE


@pytest.fixture
def write_system(tmp_path):
    """Записывает систему (или произвольный текст) во временный файл и возвращает путь."""

    def write(data, name: str = "system.json") -> str:
        path = tmp_path / name
        if isinstance(data, DefiningSystem):
            data = {"p": list(data.p), "q": list(data.q),
                    "S": [list(s) for s in data.S], "T": [list(t) for t in data.T]}
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return str(path)

    return write
