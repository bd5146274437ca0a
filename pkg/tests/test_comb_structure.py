import pytest

from services import comb_structure as cst
from services.comb_structure import CombStructure, admissible_set, check_axioms, extend
from services.correspondence import derive_structure
from services.errors import DomainError, PreconditionError, StructureError
from services.models import PartialMap, x, z
from tests.conftest import E1


def toy_structure() -> CombStructure:
    # три индекса по кругу: φ(a) = b, φ(b) = c, φ(c) = a
    return CombStructure(
        I={"a", "b", "c"},
        phi={"a": "b", "b": "c", "c": "a"},
        rho={},
        psi={},
        l={"a": -1, "b": 0, "c": 0},
    )


def test_partial_map_must_be_injective():
    with pytest.raises(StructureError):
        PartialMap({"a": "c", "b": "c"})


def test_partial_map_helpers():
    pmap = PartialMap({1: 2, 2: 3}, name="f")
    assert pmap(1) == 2
    assert pmap(3) is None
    assert pmap.inverse()[3] == 2
    assert dict(pmap.compose(pmap)) == {1: 3}
    assert dict(pmap.restrict({2})) == {2: 3}
    with pytest.raises(StructureError):
        pmap.extended(1, 5)


def test_l_domain_is_checked():
    with pytest.raises(StructureError):
        CombStructure(I={"a", "b"}, phi={"a": "b"}, rho={}, psi={}, l={})
    with pytest.raises(StructureError):
        CombStructure(I={"a", "b"}, phi={"a": "b"}, rho={}, psi={}, l={"a": 1})


def test_maps_must_stay_inside_index_set():
    with pytest.raises(StructureError):
        CombStructure(I={"a"}, phi={"a": "b"}, rho={}, psi={}, l={"a": 0})


def test_toy_structure_axioms():
    report = check_axioms(toy_structure())
    assert report.ok
    assert report["C1"].passed


def test_failed_basic_axiom_skips_weight_axioms():
    # c не покрыт образами, b лежит в Im φ вне Dom φ ∪ Dom ρ
    cs = CombStructure(I={"a", "b", "c"}, phi={"a": "b"}, rho={}, psi={}, l={"a": 0})
    report = check_axioms(cs)
    assert not report.ok
    assert {r.axiom for r in report.failed()} == {"C1", "C7"}
    assert report["C1"].witnesses == ("a", "c")
    assert report["C12"].status == "skipped"
    assert report["C14"].status == "skipped"
    with pytest.raises(PreconditionError):
        admissible_set(cs)


def test_sigma_outside_domain():
    with pytest.raises(DomainError):
        cst.sigma(toy_structure(), "z")


def test_e1_structure_axioms_pass():
    cs = derive_structure(E1).structure
    assert cs.axioms.ok
    assert all(r.status == "pass" for r in cs.axioms.results)


def test_e1_sigma_and_weights():
    cs = derive_structure(E1).structure
    assert cst.sigma(cs, x(1, 4)) == x(1, 5)
    assert cs.l[x(1, 5)] == -2
    assert cst.sigma(cs, x(1, 0)) == x(1, 1)
    assert cst.sigma(cs, z(2, 2)) == x(2, 2)


def test_e1_u_walk_reaches_tail():
    cs = derive_structure(E1).structure
    k = cst.u(cs, z(1, 8))
    target = cst.eta_power(cs, z(1, 8), k)
    assert target in cs.phi
    assert target not in cs.psi


def test_e1_admissible_set():
    cs = derive_structure(E1).structure
    assert admissible_set(cs) == {z(1, 8), z(2, 2)}


def test_e1_extension_by_rho_image_index():
    cs = derive_structure(E1).structure
    assert z(1, 8) in cs.rho.image
    extended = extend(cs, z(1, 8), "new")
    assert extended.axioms.ok
    assert "new" in extended.I
    assert "new" in extended.psi.image
    assert extended.phi["new"] == cs.phi[z(1, 8)]


def test_extension_requires_fresh_and_admissible_index():
    cs = derive_structure(E1).structure
    with pytest.raises(PreconditionError):
        extend(cs, z(1, 8), x(1, 0))
    with pytest.raises(PreconditionError):
        extend(cs, x(1, 0), "new")


def test_structures_compare_by_value():
    assert toy_structure() == toy_structure()
    with pytest.raises(TypeError):
        hash(toy_structure())
