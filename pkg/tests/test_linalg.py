import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitcheck import linalg


def test_rng_for_is_deterministic_and_label_sensitive():
    a = linalg.rng_for("go", "so(5)/u(2)", 0, 3).normal(size=4)
    b = linalg.rng_for("go", "so(5)/u(2)", 0, 3).normal(size=4)
    c = linalg.rng_for("go", "so(5)/u(2)", 0, 4).normal(size=4)
    np.testing.assert_array_equal(a, b)
    assert np.abs(a - c).max() > 0


def test_svd_rank_matches_known_ranks():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(9, 5))
    assert linalg.svd_rank(a) == 5
    a[:, 4] = a[:, 0] + 2 * a[:, 1]
    assert linalg.svd_rank(a) == 4
    assert linalg.svd_rank(np.zeros((6, 3))) == 0


def test_rank_threshold_has_absolute_floor():
    s = np.array([1e-15])
    assert linalg.rank_threshold(s, (4, 4)) >= linalg.RANK_FLOOR


def test_nullspace_orthonormal_and_annihilating():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(40, 11))
    a[:, 6] = a[:, 1] - a[:, 3]
    a[:, 9] = a[:, 0]
    k = linalg.nullspace(a)
    assert k.shape == (11, 2)
    np.testing.assert_allclose(k.T @ k, np.eye(2), atol=1e-12)
    assert np.abs(a @ k).max() < 1e-12


def test_nullspace_wide_matrix_keeps_all_kernel_directions():
    a = np.array([[1.0, 0.0, 0.0, 0.0]])
    k = linalg.nullspace(a)
    assert k.shape == (4, 3)
    assert np.abs(a @ k).max() < 1e-14


def test_column_space_spans_input():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(8, 3)) @ rng.normal(size=(3, 6))
    q = linalg.column_space(a)
    assert q.shape == (8, 3)
    proj = q @ (q.T @ a)
    np.testing.assert_allclose(proj, a, atol=1e-10)


def test_min_norm_solve_picks_least_norm_solution():
    a = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    b = np.array([2.0, 3.0])
    x, residual = linalg.min_norm_solve(a, b)
    np.testing.assert_allclose(x, [2.0, 3.0, 0.0], atol=1e-13)
    assert residual == pytest.approx(0.0, abs=1e-13)


def test_consistency_gap_flags_unsolvable_system():
    a = np.zeros((3, 2))
    a[0, 0] = 1.0
    rank_a, rank_aug, margin = linalg.consistency_gap(a, np.array([0, 1.0, 0]))
    assert rank_aug == rank_a + 1
    assert margin == pytest.approx(1.0)


def test_consistency_gap_solvable_has_no_gap():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(6, 4))
    b = a @ rng.normal(size=4)
    rank_a, rank_aug, _ = linalg.consistency_gap(a, b)
    assert rank_a == rank_aug == 4


def test_gram_orthonormalize_respects_metric():
    rng = np.random.default_rng(2)
    gram = np.diag([1.0, 2.0, 5.0, 0.5])
    basis = rng.normal(size=(4, 3))
    q = linalg.gram_orthonormalize(basis, gram)
    np.testing.assert_allclose(q.T @ gram @ q, np.eye(3), atol=1e-10)


def test_subspace_intersection():
    e = np.eye(4)
    a = e[:, :3]
    b = e[:, 1:]
    inter = linalg.subspace_intersection(a, b)
    assert inter.shape[1] == 2
    # intersection lies in both spans
    assert np.abs(inter - a @ (a.T @ inter)).max() < 1e-12
    assert np.abs(inter - b @ (b.T @ inter)).max() < 1e-12


def test_sym_basis_spans_symmetric_matrices():
    basis = linalg.sym_basis(3)
    assert basis.shape[0] == 6
    for mat in basis:
        np.testing.assert_allclose(mat, mat.T)
    flat = basis.reshape(6, -1)
    assert linalg.svd_rank(flat.T) == 6


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=25, deadline=None)
def test_random_unit_has_unit_norm(dim, seed):
    rng = np.random.default_rng(seed)
    v = linalg.random_unit(rng, dim)
    assert v.shape == (dim,)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=2 ** 31))
@settings(max_examples=25, deadline=None)
def test_nullspace_dimension_theorem(n, seed):
    rng = np.random.default_rng(seed)
    rank = rng.integers(0, n + 1)
    a = rng.normal(size=(n + 3, rank)) @ rng.normal(size=(rank, n))
    k = linalg.nullspace(a)
    assert linalg.svd_rank(a) + k.shape[1] == n
