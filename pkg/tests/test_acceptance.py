"""End-to-end acceptance battery for the released verdicts and bounds.

Each test pins one release gate: positive and negative geodesic-orbit
regressions, the closed-form weight constructions, the structure
classifier, witness-reconstruction consistency, the centralizer
property suite, global invariant residuals, and a brute-force grid
oracle. Bounds and seeds are frozen; loosening them is a release
decision, not a test fix.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from orbitcheck import catalog, core, filters, go, natred, spaces, zoo
from orbitcheck.linalg import rng_for

POSITIVE_IDS = ("go-3-k2", "go-8-n1", "go-6-m2n1", "go-5", "go-1")
METRIC_PAIRS = ((1.0, 2.0), (2.0, 1.0), (1.0, 5.0))

_SPACE_CACHE = {}


def space_for(entry_id):
    if entry_id not in _SPACE_CACHE:
        _SPACE_CACHE[entry_id] = catalog.catalog_instantiate(
            catalog.get_entry(entry_id), seed=0)
    return _SPACE_CACHE[entry_id]


def module_vector(space, index, rng):
    block = space.module_coords_in_m(index)
    v = block @ rng.normal(size=block.shape[1])
    return v / np.linalg.norm(v)


def test_positive_go_regression_under_60s():
    start = time.monotonic()
    worst = 0.0
    for entry_id in POSITIVE_IDS:
        space = space_for(entry_id)
        for lam, mu in METRIC_PAIRS:
            verdict = go.go_check(space, (lam, mu), n_samples=100, seed=0)
            assert verdict.status == "GO_CONSISTENT", \
                (entry_id, lam, mu, verdict.status)
            worst = max(worst, verdict.max_residual)
    # the isotypic pair also carries non-scalar metrics with cross terms
    triality = space_for("go-1")
    block = go.MetricOperator.block(
        triality, [np.array([[1.0, 0.2], [0.2, 2.0]])])
    assert not block.is_scalar
    verdict = go.go_check(triality, block, n_samples=100, seed=0)
    assert verdict.status == "GO_CONSISTENT"
    worst = max(worst, verdict.max_residual)
    elapsed = time.monotonic() - start
    assert worst <= 1e-8
    assert elapsed <= 60.0


def test_negative_regression_principal_triple():
    space = space_for("t1-V.10")
    report = filters.necessary_filter(space)
    assert not report.passed
    # a generic stabilizer dimension is 0 where the rule needs >= 1
    assert any(rule.required >= 1 and rule.actual == 0
               for rule in report.rules)
    verdict = go.go_check(space, (1.0, 2.0), n_samples=100, seed=0)
    assert verdict.status == "NOT_GO"
    cex = verdict.counterexample
    assert cex is not None
    assert cex.rank_gap >= 1
    assert cex.margin >= 1e3 * go.DEFAULT_TOL


def test_ledger_obata_random_battery_and_exact_instance():
    rng = np.random.default_rng(0)
    count = 0
    while count < 1000:
        a = rng.uniform(0.1, 3.0)
        c = rng.uniform(0.1, 3.0)
        b = rng.uniform(-2.0, 2.0)
        if a * c - b * b <= 0.01:
            continue
        if min(abs(b), abs(a + b), abs(b + c)) < 0.1:
            continue
        sol = natred.ledger_obata_solve(a, b, c)
        assert sol.kind == "generic"
        assert sol.sum_identity_residual <= 1e-12
        residual = natred.ledger_obata_verify(sol.metric, sol.triple, "so3")
        assert residual <= 1e-10
        count += 1
    sol = natred.ledger_obata_solve(3, 1, 2)
    triple = sol.triple
    assert (triple.alpha, triple.beta, triple.gamma) == (
        Fraction(5, 3), Fraction(5, 4), Fraction(-5))
    assert natred.ledger_obata_verify_exact(sol.metric, triple) == 0


def test_two_factor_identity_battery_and_normal_branch():
    rng = np.random.default_rng(0)
    count = 0
    while count < 1000:
        a = rng.uniform(0.1, 3.0)
        b = rng.uniform(0.1, 3.0)
        if abs(3 * a - b) < 0.1:
            continue
        weights = natred.product_biinvariant_weights(a, b)
        assert weights.kind == "product"
        assert weights.identity_residual <= 1e-12
        count += 1
    assert natred.product_biinvariant_weights(1, 3).kind == "normal"


def test_structure_classifier_covers_all_cases():
    expected = {}
    observed = {}
    for entry in catalog.catalog_list(source="decomposition-cases"):
        space = space_for(entry.id)
        report = spaces.classify_structure(space)
        observed[entry.id] = (report.case_label, report.counting_value)
        expected[entry.id] = (entry.expected["structure_case"],
                              entry.expected["counting_value"])
    assert observed == expected
    assert len(observed) >= 6
    assert sorted(case for case, _ in observed.values()) == [1, 2, 3, 4, 5, 6, 7]


def test_witness_reconstruction_consistency():
    space = space_for("go-3-k2")
    weight_pairs = ((1.0, 2.0), (2.0, 1.0), (1.0, 5.0), (5.0, 1.0),
                    (2.0, 3.0), (3.0, 2.0), (1.0, 10.0), (3.0, 7.0),
                    (2.0, 5.0), (7.0, 4.0))
    for i in range(50):
        rng = rng_for("acceptance-graph", space.name, 0, i)
        x = module_vector(space, 0, rng)
        y = module_vector(space, 1, rng)
        dec = go.zxzy_decompose(space, x, y)
        assert dec.residual <= 1e-8
        for lam, mu in weight_pairs:
            graph = go.geodesic_graph(space, lam, mu, x, y)
            assert graph.residual <= 1e-8
            np.testing.assert_allclose(
                graph.z, dec.reconstruct(lam, mu), atol=1e-8)


def _go_consistent_entries():
    return [e for e in catalog.catalog_list(source="go-classification",
                                            constructible=True)
            if e.expected["go"]]


@pytest.mark.parametrize(
    "entry_id", [e.id for e in _go_consistent_entries()])
def test_centralizer_corollaries_have_zero_violations(entry_id):
    space = space_for(entry_id)
    g = space.g
    gram = g.inner_product
    location = filters.bracket_location(space)
    k_basis = np.hstack([space.h.basis, space.modules[0].basis])
    tol = 1e-8

    def contains(outer, inner):
        if inner.shape[1] == 0:
            return True
        if outer.shape[1] == 0:
            return False
        proj = outer @ (outer.T @ gram @ inner)
        return float(np.abs(inner - proj).max()) <= 1e-7

    for i in range(200):
        rng = rng_for("acceptance-bracket-pairs", space.name, 0, i)
        x = space.modules[0].basis @ rng.normal(size=space.modules[0].dim)
        y = space.modules[1].basis @ rng.normal(size=space.modules[1].dim)
        x /= np.sqrt(x @ gram @ x)
        y /= np.sqrt(y @ gram @ y)
        bracket = g.bracket(x, y)
        q1 = space.modules[0].basis.T @ gram @ bracket
        q2 = space.modules[1].basis.T @ gram @ bracket
        split = filters.normalizer_split(space, x + y)
        # trivial complement forces a vanishing mixed bracket
        if split.c_tilde.shape[1] == 0:
            assert np.linalg.norm(np.concatenate([q1, q2])) <= tol
        # nested centralizers confine the bracket to the small module
        cx = filters.centralizer(g, space.h.basis, x)
        cy = filters.centralizer(g, space.h.basis, y)
        if contains(cy, cx):
            assert np.linalg.norm(q2) <= tol
        if contains(cx, cy):
            assert np.linalg.norm(q1) <= tol
        # a bracket meeting both modules needs a 2-dim complement
        if np.linalg.norm(q1) > 1e-6 and np.linalg.norm(q2) > 1e-6:
            assert split.c_tilde.shape[1] >= 2
        # with an intermediate subalgebra the big-module stabilizer
        # dimension dominates dim m1
        if location == "in_m2":
            ck = filters.centralizer(g, k_basis, y)
            assert ck.shape[1] >= space.modules[0].dim


def test_invariant_residuals_on_zoo_outputs():
    names = ["so(3)", "so(4)", "so(5)", "so(6)", "so(7)", "so(8)", "so(9)",
             "su(2)", "su(3)", "su(4)", "su(5)", "u(2)", "u(3)",
             "sp(1)", "sp(2)", "sp(3)", "g2", "torus(2)", "su(3)+su(2)"]
    for name in names:
        alg = zoo.algebra_by_name(name)
        assert core.jacobi_residual(alg.structure) <= 1e-12, name
        anti = float(np.abs(alg.structure +
                            alg.structure.transpose(1, 0, 2)).max())
        assert anti <= 1e-12, name
        assert alg.inner_ad_invariance() <= 1e-12, name
    for entry_id in POSITIVE_IDS:
        space = space_for(entry_id)
        metric = go.MetricOperator.two_param(space, 1.0, 2.0)
        action = space.iso_action
        comm = np.einsum("aij,jk->aik", action, metric.matrix) - \
            np.einsum("ij,ajk->aik", metric.matrix, action)
        assert float(np.abs(comm).max()) <= 1e-12, entry_id


def test_metric_space_dimension_census():
    for entry in catalog.catalog_list(source="go-classification",
                                      constructible=True):
        space = space_for(entry.id)
        expected = 3 if entry.id == "go-1" else 2
        assert space.metric_space_dim == expected, entry.id


def test_brute_force_grid_oracle_on_su3_su2():
    space = space_for("go-6-m2n1")
    metric = go.MetricOperator.two_param(space, 1.0, 2.0)
    dm = space.m.dim
    points = []
    for i in range(1000):
        rng = rng_for("acceptance-grid", space.name, 0, i)
        v = rng.normal(size=dm)
        points.append(v / np.linalg.norm(v))
    for j in range(dm):
        for sign in (1.0, -1.0):
            e = np.zeros(dm)
            e[j] = sign
            points.append(e)
    worst = 0.0
    for point in points:
        witness = go.go_witness_general(space, metric, point)
        assert witness.z is not None, point
        worst = max(worst, witness.residual)
    assert worst <= 1e-8
    verdict = go.go_check(space, (1.0, 2.0), n_samples=100, seed=0)
    assert verdict.status == "GO_CONSISTENT"
