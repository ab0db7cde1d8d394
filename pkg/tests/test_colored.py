"""Colored matrix spaces: orbit classes, projection, bases, membership."""

import numpy as np

from conftest import cyc, gen, random_cone_point
from rcopselect import (
    basis,
    coloring,
    membership,
    orthonormal_basis,
    project,
)


def rand_sym(rng, p):
    g = rng.standard_normal((p, p))
    return g + g.T


def test_projection_idempotent_and_self_adjoint(corpus):
    rng = np.random.default_rng(11)
    for label, g in corpus:
        p = g.p
        col = coloring(g)
        for _ in range(4):
            a = rand_sym(rng, p)
            b = rand_sym(rng, p)
            pa = project(col, a)
            assert np.max(np.abs(project(col, pa) - pa)) < 1e-12, label
            # <pi(a), b> = <a, pi(b)> in the trace inner product
            lhs = float(np.sum(pa * b))
            rhs = float(np.sum(a * project(col, b)))
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs)), label


def test_projection_preserves_trace_and_symmetry(corpus):
    rng = np.random.default_rng(5)
    for label, g in corpus:
        a = rand_sym(rng, g.p)
        pa = project(g, a)
        assert abs(np.trace(pa) - np.trace(a)) < 1e-10, label
        assert np.max(np.abs(pa - pa.T)) == 0.0, label


def test_projection_output_is_invariant(corpus):
    rng = np.random.default_rng(7)
    for label, g in corpus:
        pa = project(g, rand_sym(rng, g.p))
        assert membership(g, pa, tol=1e-10), label


def test_projection_fixes_invariant_matrices(corpus):
    rng = np.random.default_rng(9)
    for label, g in corpus:
        x = random_cone_point(g, rng)
        assert np.max(np.abs(project(g, x) - x)) < 1e-12, label


def test_projection_averages_asymmetric_part():
    g = cyc("", 2)
    a = np.array([[1.0, 3.0], [5.0, 2.0]])
    pa = project(g, a)
    assert np.allclose(pa, [[1.0, 4.0], [4.0, 2.0]])


def test_membership_rejects_non_invariant():
    g = cyc("(1,2,3)", 3)
    x = np.diag([1.0, 2.0, 3.0])
    assert not membership(g, x)
    assert membership(g, np.eye(3))


def test_trivial_group_coloring_dims():
    for p in (1, 2, 4):
        col = coloring(cyc("", p))
        assert col.n_vertex_classes == p
        assert col.n_edge_classes == p * (p - 1) // 2
        assert col.dim == p * (p + 1) // 2


def test_full_symmetric_group_coloring():
    col = coloring(gen(4, "(1,2)", "(1,2,3,4)"))
    assert col.dim == 2
    assert col.n_vertex_classes == 1
    assert col.n_edge_classes == 1


def test_four_cycle_coloring_layout():
    col = coloring(cyc("(1,2,3,4)", 4))
    # one vertex class, edge classes {12,23,34,14} and {13,24}
    assert col.n_vertex_classes == 1
    assert col.n_edge_classes == 2
    grid = col.grid
    assert grid[0, 0] == grid[1, 1] == grid[2, 2] == grid[3, 3]
    assert grid[0, 1] == grid[1, 2] == grid[2, 3] == grid[0, 3]
    assert grid[0, 2] == grid[1, 3]
    assert grid[0, 1] != grid[0, 2]
    assert np.array_equal(grid, grid.T)


def test_class_sizes_sum():
    # sizes count grid cells, so each unordered pair contributes two cells
    col = coloring(cyc("(1,2,3)(4,5)", 6))
    sizes = col.class_sizes()
    assert sum(sizes[: col.n_vertex_classes]) == 6
    assert sum(sizes[col.n_vertex_classes:]) == 30


def test_basis_reconstructs_projection(small_corpus):
    rng = np.random.default_rng(3)
    for label, g in small_corpus:
        col = coloring(g)
        mats = basis(col)
        assert len(mats) == col.dim
        a = rand_sym(rng, g.p)
        # expand pi(a) in the 0/1 indicator basis by averaging over classes
        coords = [np.sum(a * m) / np.sum(m * m) for m in mats]
        rebuilt = sum(c * m for c, m in zip(coords, mats))
        sym = (a + a.T) / 2
        assert np.max(np.abs(rebuilt - project(col, sym))) < 1e-12, label


def test_orthonormal_basis_is_orthonormal(small_corpus):
    for label, g in small_corpus:
        col = coloring(g)
        mats = orthonormal_basis(col)
        gram = np.array([[np.sum(a * b) for b in mats] for a in mats])
        assert np.max(np.abs(gram - np.eye(len(mats)))) < 1e-12, label


def test_projection_commutes_with_scaling_and_shift():
    g = cyc("(1,2,3,4)", 4)
    rng = np.random.default_rng(1)
    a = rand_sym(rng, 4)
    assert np.allclose(project(g, 2.5 * a + np.eye(4)),
                       2.5 * project(g, a) + np.eye(4), atol=1e-12)


def test_coloring_cached_by_group_key():
    a = coloring(cyc("(1,2,3)", 3))
    b = coloring(cyc("(1,3,2)", 3))
    assert a.dim == b.dim
    assert np.array_equal(a.grid, b.grid)


def test_pooled_labels_layout():
    col = coloring(cyc("(1,2)", 2))
    pooled = col.pooled_labels()
    # two diagonal cells in one class, one off-diagonal class
    assert len(pooled) == 3
    assert pooled[0] == pooled[1]
    assert pooled[2] != pooled[0]
