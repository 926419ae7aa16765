import numpy as np
import pytest

from orbitcheck import core, filters, spaces, zoo
from orbitcheck.linalg import rng_for


def test_centralizer_of_basis_vector_in_so3():
    so3 = zoo.classical("so", 3)
    u = np.array([1.0, 0.0, 0.0])
    cent = filters.centralizer(so3, np.eye(3), u)
    assert cent.shape[1] == 1
    assert np.abs(so3.bracket(cent[:, 0], u)).max() < 1e-12


def test_normalizer_split_dims_on_projective_pair(so5_u2):
    rng = rng_for("test-split", so5_u2.name, 0, 0)
    xm = so5_u2.modules[0].basis @ rng.normal(size=2)
    ym = so5_u2.modules[1].basis @ rng.normal(size=4)
    split = filters.normalizer_split(so5_u2, xm + ym)
    # generic direction: trivial centralizer, all of h normalizes
    assert split.dims == (0, 4, 4)
    split1 = filters.normalizer_split(so5_u2, xm)
    assert split1.dims == (3, 4, 1)


def test_normalizer_complement_commutes_with_centralizer(so5_u2):
    g = so5_u2.g
    rng = rng_for("test-split", so5_u2.name, 1, 0)
    xm = so5_u2.modules[0].basis @ rng.normal(size=2)
    split = filters.normalizer_split(so5_u2, xm)
    c, c_tilde = split.c, split.c_tilde
    assert c.shape[1] and c_tilde.shape[1]
    for s in range(c_tilde.shape[1]):
        for t in range(c.shape[1]):
            assert np.abs(g.bracket(c_tilde[:, s], c[:, t])).max() < 1e-10
    # the complement is orthogonal to the centralizer inside n
    assert np.abs(c.T @ g.inner_product @ c_tilde).max() < 1e-10


BRACKET_LOCATIONS = {
    "so5_u2": "in_m2",
    "so8_g2": "mixed",
    "su3_su2": "in_m2",
    "sp2_sp1u1": "in_m2",
    "so9_spin7": "in_m2",
    "sp3_principal": "mixed",
    "so9_tensor": "mixed",
}


@pytest.mark.parametrize("fixture_name", sorted(BRACKET_LOCATIONS))
def test_bracket_location_is_stable(fixture_name, request):
    space = request.getfixturevalue(fixture_name)
    assert filters.bracket_location(space) == BRACKET_LOCATIONS[fixture_name]


def test_principal_isotropy_dims():
    # generic stabilizer of the 7-dim representation is 8-dimensional
    g2_action = zoo.embed_g2_in_so7()
    so7_mats = np.stack(zoo.matrix_basis("so", 7))
    action = np.einsum("ka,kpq->apq", g2_action.matrix, so7_mats)
    assert filters.principal_isotropy_dim(action) == 8
    # the adjoint action of so(3) on itself keeps the axis
    so3 = zoo.classical("so", 3)
    adjoint = np.stack([so3.ad(e) for e in np.eye(3)])
    assert filters.principal_isotropy_dim(adjoint) == 1
    # a trivial action stabilizes everything
    assert filters.principal_isotropy_dim(np.zeros((5, 4, 4))) == 5


def test_filter_passes_on_go_catalog_spaces(so5_u2, so8_g2):
    rep = filters.necessary_filter(so5_u2)
    assert rep.passed
    assert rep.bracket_location == "in_m2"
    assert rep.principal_dims == {
        "module_1_stabilizer": 3,
        "module_2_stabilizer": 1,
        "extended_action_stabilizer": 3,
    }
    assert [r.rule for r in rep.rules] == [
        "module_1_stabilizer_positive", "extended_action_stabilizer_bound"]
    rep2 = filters.necessary_filter(so8_g2)
    assert rep2.passed
    assert rep2.principal_dims == {
        "module_1_stabilizer": 8, "module_2_stabilizer": 8}


def test_filter_fails_on_principal_triple(sp3_principal):
    rep = filters.necessary_filter(sp3_principal)
    assert not rep.passed
    assert rep.bracket_location == "mixed"
    # both generic stabilizers vanish
    assert rep.principal_dims["module_1_stabilizer"] == 0
    assert rep.principal_dims["module_2_stabilizer"] == 0
    for rule in rep.rules:
        assert rule.required == 1 and rule.actual == 0


def test_filter_fails_on_tensor_space(so9_tensor):
    rep = filters.necessary_filter(so9_tensor)
    assert not rep.passed
    data = rep.as_dict()
    assert data["passed"] is False
    assert data["bracket_location"] == "mixed"
    assert all(not r["passed"] for r in data["rules"])


def test_commuting_modules_branch_on_a_product():
    so3 = zoo.classical("so", 3)
    g = core.direct_sum([so3, so3], name="so(3)+so(3)")
    circle = zoo.embed_so_in_so(2, 3)
    emb = zoo.embed_sum([zoo.embed_into_summand(circle, g, 0),
                         zoo.embed_into_summand(circle, g, 3)])
    space = spaces.decompose_isotropy(
        spaces.reductive_space(g, emb, name="product-of-spheres"))
    assert space.module_dims == (2, 2)
    rep = filters.necessary_filter(space)
    assert rep.bracket_location == "zero"
    assert rep.passed
    assert rep.principal_dims["algebra_components"] == 2
    assert rep.rules[0].rule == "commuting_modules_need_decomposable_g"


def test_filter_requires_two_modules():
    space = spaces.reductive_space(
        None, zoo.named_embedding("u_in_so_odd", k=2))
    with pytest.raises(filters.FilterError):
        filters.necessary_filter(space)
    with pytest.raises(filters.FilterError):
        filters.bracket_location(space)
