from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings, strategies as st

from services.errors import DomainError
from services.models import Vertex, x, z
from services.navigation import Navigator, classify, fraktur, h, mu, navigator, nu, omega
from tests.conftest import E1, QUICK_SWEEP


def test_e1_vertex_classes():
    classes = classify(E1)
    assert classes.x0 == {x(1, 0), x(2, 0)}
    assert classes.x1 == {x(1, j) for j in range(1, 6)} | {x(2, 1), x(2, 2)}
    assert classes.x2 == {x(1, 6), x(2, 3)}
    assert classes.x3 == {x(1, 7)}
    assert classes.x4 == {x(1, 8), x(2, 3)}
    assert len(classes.z) == 5
    assert len(classes.x_all) == 13


def test_e1_fraktur_maps():
    maps = fraktur(E1)
    assert dict(maps.R) == {
        x(1, 6): x(2, 0),
        x(2, 3): x(1, 0),
        x(1, 7): x(1, 4),
        x(1, 8): x(1, 6),
    }
    assert dict(maps.T) == {x(1, 7): z(1, 4), x(1, 8): z(1, 6)}
    assert maps.S[z(2, 2)] == x(2, 2)
    assert maps.P[x(1, 1)] == x(1, 0)
    assert x(1, 0) not in maps.P
    assert maps.image_ST == {x(1, 4), x(1, 6)}


def test_e1_h_and_omega():
    assert h(E1, x(1, 7)) == 8
    assert omega(E1, x(1, 7)).label == "α_{1,8}"
    assert h(E1, x(1, 8)) == 8
    assert omega(E1, x(1, 8)).is_trivial
    assert h(E1, x(2, 1)) == 3
    path = omega(E1, x(2, 1))
    assert (path.source, path.target, len(path)) == (x(2, 3), x(2, 1), 2)


def test_e1_mu():
    path = mu(E1, x(1, 6))
    assert path.vertices == (x(1, 6), Vertex("y", 1, 1), x(2, 0))
    path = mu(E1, x(1, 7))
    assert path.vertices == (x(1, 7), z(1, 4), x(1, 4))
    assert [a.kind for a in path.arrows] == ["xi", "gamma"]
    assert mu(E1, x(1, 2)).is_trivial


def test_e1_nu():
    path = nu(E1, x(1, 6))
    assert path.vertices == (z(1, 8), x(1, 8), z(1, 6), x(1, 6))
    assert path.source == z(1, 8)
    assert nu(E1, x(1, 3)).is_trivial
    assert nu(E1, x(2, 2)).vertices == (z(2, 2), x(2, 2))


def test_navigation_rejects_z_vertices():
    with pytest.raises(DomainError):
        mu(E1, z(1, 2))
    with pytest.raises(DomainError):
        h(E1, z(1, 2))


def test_closed_forms_of_path_ends_on_e1():
    nav = navigator(E1)
    for v in nav.classes.x_all:
        assert nav.mu(v).target == nav.t_mu_closed(v)
        assert nav.nu(v).source == nav.s_nu_closed(v)


def test_shared_navigator_from_threads():
    expected = Navigator(E1)
    shared = Navigator(E1)
    vertices = sorted(expected.classes.x_all) * 8

    def walk(v):
        return shared.mu(v), shared.nu(v)

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(walk, vertices))
    assert results == [(expected.mu(v), expected.nu(v)) for v in vertices]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(QUICK_SWEEP))
def test_mu_nu_are_maximal_second_kind_paths(ds):
    nav = navigator(ds)
    for v in nav.classes.x_all:
        assert nav.mu(v) == nav.maximal_second_kind_path(v, outgoing=True)
        assert nav.nu(v) == nav.maximal_second_kind_path(v, outgoing=False)
        assert nav.mu(v).target == nav.t_mu_closed(v)
        assert nav.nu(v).source == nav.s_nu_closed(v)
