"""Block decomposition of colored spaces: bases, structure constants, determinants."""

import numpy as np
import pytest

from conftest import cyc, gen, random_cone_point
from rcopselect import (
    DomainError,
    Permutation,
    block_values,
    coloring,
    cyclic_basis,
    cyclic_group,
    cyclic_structure_constants,
    decompose,
    enumerate_cyclic_subgroups,
    log_det_invariant,
    log_phi_gamma,
    numeric_decompose,
    project,
)


def test_explicit_six_dim_basis():
    # sigma = (1,2,3)(4,5) fixing 6: constants per orbit, then the frequency
    # 1/3 cosine/sine pair on {1,2,3}, then the alternating vector on {4,5}.
    c = cyc("(1,2,3)(4,5)", 6)
    dec = cyclic_basis(c)
    expected = np.array([
        [1 / np.sqrt(3), 0, 0, np.sqrt(2 / 3), 0, 0],
        [1 / np.sqrt(3), 0, 0, -np.sqrt(1 / 6), 1 / np.sqrt(2), 0],
        [1 / np.sqrt(3), 0, 0, -np.sqrt(1 / 6), -1 / np.sqrt(2), 0],
        [0, 1 / np.sqrt(2), 0, 0, 0, 1 / np.sqrt(2)],
        [0, 1 / np.sqrt(2), 0, 0, 0, -1 / np.sqrt(2)],
        [0, 0, 1, 0, 0, 0],
    ])
    assert np.max(np.abs(dec.basis - expected)) < 1e-12
    assert [b.triple() for b in dec.blocks] == [(3, 1, 1), (1, 2, 2), (1, 1, 1)]


def test_structure_constants_four_cycle():
    c = cyc("(1,2,3,4)", 4)
    blocks = cyclic_structure_constants(c)
    assert [b.triple() for b in blocks] == [(1, 1, 1), (1, 2, 2), (1, 1, 1)]
    assert [b.canonical_triple() for b in blocks] == [(1, 1, 1), (1, 1, 2), (1, 1, 1)]


def test_structure_constants_trivial_group():
    c = cyc("", 5)
    blocks = cyclic_structure_constants(c)
    assert [b.triple() for b in blocks] == [(5, 1, 1)]


def test_structure_constants_large_prime_cycle():
    c = cyc("(1,2,3,4,5,6,7)", 7)
    triples = [b.triple() for b in cyclic_structure_constants(c)]
    assert triples[0] == (1, 1, 1)
    assert triples[1:] == [(1, 2, 2)] * 3


def test_block_widths_partition_p(corpus):
    for label, g in corpus:
        dec = decompose(g)
        assert sum(b.rank * b.mult for b in dec.blocks) == g.p, label
        starts = [b.start for b in dec.blocks]
        stops = [b.stop for b in dec.blocks]
        assert starts[0] == 0 and stops[-1] == g.p
        assert all(a == b for a, b in zip(stops[:-1], starts[1:]))


def test_dimension_identity(corpus):
    # sum of block cone dimensions equals the colored space dimension
    for label, g in corpus:
        dec = decompose(g)
        assert dec.dim == coloring(g).dim, label


def test_basis_orthogonality(corpus):
    for label, g in corpus:
        u = decompose(g).basis
        assert np.max(np.abs(u.T @ u - np.eye(g.p))) < 1e-12, label


def test_compress_block_diagonalizes(corpus):
    rng = np.random.default_rng(21)
    for label, g in corpus:
        dec = decompose(g)
        x = project(g, rng.standard_normal((g.p, g.p)) * 2.0 +
                    np.eye(g.p) * 0.0)
        x = (x + x.T) / 2
        y = dec.compress(x)
        assert dec.off_block_residual(y) < 1e-10 * max(1.0, np.max(np.abs(x))), label


def test_generator_conjugation_is_block_diagonal():
    for text, p in [("(1,2,3,4)", 4), ("(1,2,3)(4,5)", 6), ("(1,2,3,4,5,6,7,8)", 8)]:
        c = cyc(text, p)
        dec = decompose(c)
        perm = np.zeros((p, p))
        for i in range(1, p + 1):
            perm[c.generator(i) - 1, i - 1] = 1.0
        m = dec.basis.T @ perm @ dec.basis
        assert dec.off_block_residual(m) < 1e-10


def test_det_factorization_matches_dense(corpus):
    rng = np.random.default_rng(33)
    for label, g in corpus:
        dec = decompose(g)
        for _ in range(5):
            x = random_cone_point(g, rng)
            sign, logdet = np.linalg.slogdet(x)
            assert sign > 0
            val = log_det_invariant(dec, x)
            assert abs(val - logdet) < 1e-10 * max(1.0, abs(logdet)), label


def test_block_values_eigenvalues_match_dense():
    rng = np.random.default_rng(8)
    for text, p in [("(1,2,3,4)", 4), ("(1,2,3)(4,5)", 6)]:
        g = cyc(text, p)
        dec = decompose(g)
        x = random_cone_point(g, rng)
        vals = block_values(dec, x)
        pooled = []
        for b, ev in zip(dec.blocks, vals.eigenvalues):
            pooled.extend(list(ev) * b.mult)
        assert np.max(np.abs(np.sort(pooled) - np.linalg.eigvalsh(x))) < 1e-10


def test_block_values_detects_indefinite():
    g = cyc("(1,2,3)", 3)
    dec = decompose(g)
    x = project(g, -np.eye(3))
    vals = block_values(dec, x)
    assert not vals.positive
    with pytest.raises(DomainError):
        vals.log_dets()
    with pytest.raises(DomainError):
        log_phi_gamma(dec, x)


def test_log_phi_identity_and_homogeneity(small_corpus):
    rng = np.random.default_rng(13)
    for label, g in small_corpus:
        dec = decompose(g)
        assert abs(log_phi_gamma(dec, np.eye(g.p))) < 1e-12, label
        x = random_cone_point(g, rng)
        c = 1.7
        lhs = log_phi_gamma(dec, c * x)
        rhs = log_phi_gamma(dec, x) - dec.dim * np.log(c)
        assert abs(lhs - rhs) < 1e-10, label


def test_cyclic_and_numeric_structures_agree_small():
    # every cyclic subgroup with p <= 5
    for p in range(1, 6):
        for c in enumerate_cyclic_subgroups(p):
            fast = sorted(b.canonical_triple() for b in cyclic_structure_constants(c))
            dec = numeric_decompose(c, seed=0)
            slow = sorted(dec.canonical_triples())
            assert fast == slow, str(c.generator)


def test_cyclic_and_numeric_structures_agree_sampled():
    # seeded sample of single generators for p = 6..10
    rng = np.random.default_rng(123)
    for p in range(6, 11):
        for _ in range(4):
            images = tuple(int(v) + 1 for v in rng.permutation(p))
            c = cyclic_group(Permutation(images))
            fast = sorted(b.canonical_triple() for b in cyclic_structure_constants(c))
            slow = sorted(numeric_decompose(c, seed=1).canonical_triples())
            assert fast == slow, images


def test_numeric_handles_multi_generator_groups(small_corpus):
    for label, g in small_corpus:
        dec = numeric_decompose(g, seed=0)
        assert dec.dim == coloring(g).dim, label


def test_decompose_cache_returns_same_object():
    a = decompose(cyc("(1,2,3)", 3))
    b = decompose(cyc("(1,3,2)", 3))
    assert a is b


def test_quaternionic_block_values_positive():
    g = gen(16, "(1,2,5,6)(3,4,7,8)(9,10,13,14)(11,12,15,16)",
            "(1,3,5,7)(2,8,6,4)(9,11,13,15)(10,16,14,12)")
    dec = decompose(g)
    rng = np.random.default_rng(2)
    x = random_cone_point(g, rng)
    vals = block_values(dec, x)
    assert vals.positive
    # eigenvalue of the quaternionic block repeats mult = 4 times in the spectrum
    widths = [b.rank * b.mult for b in dec.blocks]
    assert sorted(widths) == [2, 2, 2, 2, 8]
