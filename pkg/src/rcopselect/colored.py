"""Colored symmetric matrix spaces fixed by a permutation subgroup.

A subgroup of permutations of {1,...,p} induces a coloring: vertices in a
common orbit share a diagonal color, unordered pairs in a common orbit share
an off-diagonal color.  The symmetric matrices constant on color classes are
exactly the matrices invariant under simultaneous row/column permutation by
the subgroup, and averaging entries over color classes realizes the
orthogonal projection onto that space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .perm import CyclicGroup, Permutation, PermutationGroup, _orbit_labels


def as_generators(group):
    """Normalize a group argument to (list of generator permutations, p)."""
    if isinstance(group, CyclicGroup):
        return [group.generator], group.p
    if isinstance(group, PermutationGroup):
        return list(group.generators), group.p
    if isinstance(group, Permutation):
        return [group], group.p
    gens = list(group)
    if not gens:
        raise ValueError("cannot infer p from an empty generator list")
    return gens, gens[0].p


def group_key(group):
    """Hashable canonical key identifying the subgroup a argument denotes."""
    if isinstance(group, CyclicGroup):
        return ("cyclic", group.key)
    if isinstance(group, Permutation):
        return ("cyclic", CyclicGroup(group).key)
    if isinstance(group, PermutationGroup):
        return ("full", frozenset(g.images for g in group.elements))
    gens, p = as_generators(group)
    return ("full", frozenset(g.images for g in PermutationGroup(gens, p=p).elements))


@dataclass(frozen=True)
class Coloring:
    """Partition of vertices and unordered pairs into color classes.

    grid[i, j] holds the class index of entry (i+1, j+1): vertex classes come
    first (indices 0..nv-1, in order of smallest member), then pair classes
    (row-major order of smallest pair).
    """

    p: int
    vertex_classes: tuple
    edge_classes: tuple
    grid: np.ndarray

    @property
    def n_vertex_classes(self) -> int:
        return len(self.vertex_classes)

    @property
    def n_edge_classes(self) -> int:
        return len(self.edge_classes)

    @property
    def dim(self) -> int:
        """Dimension of the colored space: one per color class."""
        return len(self.vertex_classes) + len(self.edge_classes)

    def class_sizes(self) -> np.ndarray:
        """Number of matrix entries carrying each class index."""
        return np.bincount(self.grid.ravel(), minlength=self.dim)

    def pooled_labels(self) -> np.ndarray:
        """Class label of each vertex then each pair i<j, for partition
        comparison across colorings of the same p."""
        p = self.p
        iu = np.triu_indices(p, k=1)
        return np.concatenate([np.diagonal(self.grid), self.grid[iu]])


def coloring(group) -> Coloring:
    """Compute the coloring induced by a subgroup, from its generators.

    Orbits of the generated group equal connected components under the
    generator moves, so the full element set is never enumerated.
    """
    gens, p = as_generators(group)
    gens_images = [g.images for g in gens]

    vlabels = _orbit_labels(p, gens_images)
    vclasses = {}
    for i in range(p):
        vclasses.setdefault(vlabels[i], []).append(i + 1)

    # union-find over unordered pairs i<j, moved entrywise by each generator
    npairs = p * (p - 1) // 2
    pair_id = {}
    pairs = []
    for i in range(1, p):
        for j in range(i + 1, p + 1):
            pair_id[(i, j)] = len(pairs)
            pairs.append((i, j))
    parent = list(range(npairs))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gi in gens_images:
        for idx, (i, j) in enumerate(pairs):
            a, b = gi[i - 1], gi[j - 1]
            if a > b:
                a, b = b, a
            other = pair_id[(a, b)]
            ra, rb = find(idx), find(other)
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb

    eclasses = {}
    for idx in range(npairs):
        eclasses.setdefault(find(idx), []).append(pairs[idx])

    vertex_classes = tuple(tuple(v) for _, v in sorted(vclasses.items()))
    edge_classes = tuple(tuple(v) for _, v in sorted(eclasses.items()))

    grid = np.empty((p, p), dtype=np.intp)
    for ci, members in enumerate(vertex_classes):
        for i in members:
            grid[i - 1, i - 1] = ci
    off = len(vertex_classes)
    for ci, members in enumerate(edge_classes, start=off):
        for i, j in members:
            grid[i - 1, j - 1] = ci
            grid[j - 1, i - 1] = ci
    return Coloring(p=p, vertex_classes=vertex_classes, edge_classes=edge_classes, grid=grid)


def project(group, x: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the colored space, by class averaging.

    Accepts a group (coloring computed on the fly) or a precomputed Coloring.
    The input is symmetrized first; cost is O(p^2) regardless of group order.
    """
    col = group if isinstance(group, Coloring) else coloring(group)
    x = np.asarray(x, dtype=float)
    if x.shape != (col.p, col.p):
        raise ValueError(f"expected a {col.p}x{col.p} matrix, got {x.shape}")
    xs = 0.5 * (x + x.T)
    sums = np.bincount(col.grid.ravel(), weights=xs.ravel(), minlength=col.dim)
    means = sums / col.class_sizes()
    return means[col.grid]


def basis(col: Coloring):
    """Indicator basis of the colored space, one 0/1-pattern per class.

    Vertex classes give diagonal indicators; pair classes give symmetric
    off-diagonal indicators.  Order matches the class indices of the grid.
    """
    out = []
    for ci in range(col.dim):
        out.append((col.grid == ci).astype(float))
    return out


def orthonormal_basis(col: Coloring):
    """Basis of the colored space orthonormal under <x, y> = trace(xy)."""
    out = []
    for b in basis(col):
        out.append(b / np.sqrt(np.sum(b * b)))
    return out


def membership(group, x: np.ndarray, tol: float = 1e-9) -> bool:
    """Whether x is (numerically) invariant under the subgroup.

    Checks max |R(s) x R(s)' - x| <= tol * max |x| for each generator s,
    which suffices because invariance under generators implies invariance
    under the whole group.
    """
    gens, p = as_generators(group)
    x = np.asarray(x, dtype=float)
    if x.shape != (p, p):
        raise ValueError(f"expected a {p}x{p} matrix, got {x.shape}")
    scale = np.max(np.abs(x))
    if scale == 0.0:
        return True
    for g in gens:
        inv = np.array(g.inverse().images) - 1
        moved = x[np.ix_(inv, inv)]
        if np.max(np.abs(moved - x)) > tol * scale:
            return False
    return True
