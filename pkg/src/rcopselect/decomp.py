"""Block decomposition of colored symmetric matrix spaces.

Every colored space is, after conjugation by a fixed orthogonal matrix U, a
direct sum of blocks: block i carries matrices of the form M(x_i) kron I_{k_i/d_i}
where x_i is an r_i x r_i Hermitian matrix over the reals, complexes, or
quaternions (d_i = 1, 2, 4) realized as real matrices.  Determinants and the
invariant measure factor through the r_i eigenvalues of each x_i, each of
which appears with multiplicity k_i in the conjugated matrix.

Cyclic subgroups get an exact closed-form basis built from cosine and sine
vectors along each vertex orbit.  Arbitrary subgroups are decomposed
numerically from the spectra of generic invariant matrices.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng as _rng
from .colored import as_generators, basis, coloring, group_key, project
from .errors import DecompositionError, DomainError
from .perm import CyclicGroup, Permutation

_FIELD_NAMES = {1: "R", 2: "C", 4: "H"}


@dataclass(frozen=True)
class BlockSpec:
    """Shape of one block: rank, real dimension of the base field, and
    eigenvalue multiplicity, plus its column range in the adapted basis."""

    rank: int
    field_dim: int
    mult: int
    start: int
    stop: int

    @property
    def dim_cone(self) -> int:
        """Dimension of the block's Hermitian matrix space."""
        return self.rank + self.rank * (self.rank - 1) * self.field_dim // 2

    @property
    def field(self) -> str:
        return _FIELD_NAMES[self.field_dim]

    @property
    def width(self) -> int:
        return self.stop - self.start

    def triple(self):
        return (self.rank, self.field_dim, self.mult)

    def canonical_triple(self):
        """Triple with rank-1 blocks normalized to field_dim 1.

        A rank-1 block over C or H is the same one-dimensional algebra as a
        rank-1 real block of equal multiplicity, and every formula in this
        package gives identical values for the two descriptions, so
        comparisons across decomposition paths use this normal form.
        """
        if self.rank == 1:
            return (1, 1, self.mult)
        return self.triple()


class BlockDecomposition:
    """Orthogonal basis U and block layout for one colored space."""

    def __init__(self, u: np.ndarray, blocks, key=None):
        self.basis = np.ascontiguousarray(u, dtype=float)
        self.blocks = tuple(blocks)
        self.key = key
        self.p = self.basis.shape[0]
        if sum(b.width for b in self.blocks) != self.p:
            raise DecompositionError("block widths do not cover the basis")

    @property
    def dim(self) -> int:
        return sum(b.dim_cone for b in self.blocks)

    def triples(self):
        """(rank, field_dim, mult) of each block."""
        return [b.triple() for b in self.blocks]

    def canonical_triples(self):
        """Triples in the rank-1-normalized form used for comparisons."""
        return [b.canonical_triple() for b in self.blocks]

    def compress(self, x: np.ndarray) -> np.ndarray:
        """Conjugate x into the adapted basis: U' x U."""
        return self.basis.T @ np.asarray(x, dtype=float) @ self.basis

    def off_block_residual(self, y: np.ndarray) -> float:
        """Largest |entry| of y outside the diagonal blocks."""
        mask = np.ones_like(y, dtype=bool)
        for b in self.blocks:
            mask[b.start : b.stop, b.start : b.stop] = False
        return float(np.max(np.abs(y[mask]))) if mask.any() else 0.0

    def __repr__(self) -> str:
        parts = ",".join(f"(r={b.rank},d={b.field_dim},k={b.mult})" for b in self.blocks)
        return f"BlockDecomposition[p={self.p}; {parts}]"


@dataclass(frozen=True)
class BlockValues:
    """Spectral data of one matrix in a decomposed space.

    eigenvalues[i] holds the r_i representative eigenvalues of block i, each
    of which occurs with multiplicity k_i in the ambient matrix.
    """

    eigenvalues: tuple
    log_abs_dets: np.ndarray
    signs: np.ndarray
    positive: bool

    def _require_positive(self):
        if not self.positive:
            raise DomainError("matrix is not positive definite on every block")

    def log_dets(self) -> np.ndarray:
        """log det of each block's Hermitian representative."""
        self._require_positive()
        return self.log_abs_dets

    def log_det_ambient(self, dec: BlockDecomposition) -> float:
        """log Det of the ambient matrix: sum of k_i * log det x_i."""
        self._require_positive()
        return float(sum(b.mult * ld for b, ld in zip(dec.blocks, self.log_abs_dets)))

    def log_phi(self, dec: BlockDecomposition) -> float:
        """Log of the invariant measure density: the product of block
        determinants raised to -(dim of block cone)/rank."""
        self._require_positive()
        return float(
            -sum(
                (b.dim_cone / b.rank) * ld
                for b, ld in zip(dec.blocks, self.log_abs_dets)
            )
        )


def cyclic_structure_constants(c: CyclicGroup):
    """Block shapes for a cyclic subgroup, from vertex orbit sizes alone.

    For a group of order N with orbit sizes p_1..p_C, frequency index
    alpha = 0..floor(N/2) contributes a block of rank #{c : alpha*p_c = 0 mod N}
    when that count is positive; the block is real (d=1) at alpha in {0, N/2}
    and complex (d=2) otherwise, with multiplicity k = d.
    """
    sizes = [len(o) for o in c.orbits()]
    return _cyclic_blocks(sizes, c.order)


def _cyclic_blocks(orbit_sizes, order):
    blocks = []
    start = 0
    for alpha in range(order // 2 + 1):
        r = sum(1 for pc in orbit_sizes if (alpha * pc) % order == 0)
        if r == 0:
            continue
        d = 1 if (alpha == 0 or 2 * alpha == order) else 2
        width = r * d
        blocks.append(BlockSpec(rank=r, field_dim=d, mult=d, start=start, stop=start + width))
        start += width
    return tuple(blocks)


def cyclic_basis(c: CyclicGroup) -> BlockDecomposition:
    """Exact adapted basis for a cyclic subgroup.

    Each orbit of size q contributes the constant vector, cosine/sine pairs
    at frequencies beta/q for 0 < beta < q/2, and the alternating vector when
    q is even.  Columns are sorted by frequency, then orbit, cosine before
    sine, which groups them into the blocks of cyclic_structure_constants.
    """
    return _cyclic_basis_from_orbits(c.orbits(), c.order, c.p, key=group_key(c))


def _cyclic_basis_from_orbits(orbits, order, p, key=None):
    cols = []
    for ci, orbit in enumerate(orbits):
        q = len(orbit)
        idx = np.asarray(orbit, dtype=np.intp) - 1
        ks = np.arange(q)
        v = np.zeros(p)
        v[idx] = np.sqrt(1.0 / q)
        cols.append((Fraction(0), ci, 0, v))
        for beta in range(1, (q - 1) // 2 + 1):
            ang = 2.0 * np.pi * beta * ks / q
            vc = np.zeros(p)
            vc[idx] = np.sqrt(2.0 / q) * np.cos(ang)
            vs = np.zeros(p)
            vs[idx] = np.sqrt(2.0 / q) * np.sin(ang)
            cols.append((Fraction(beta, q), ci, 0, vc))
            cols.append((Fraction(beta, q), ci, 1, vs))
        if q % 2 == 0:
            v = np.zeros(p)
            v[idx] = np.sqrt(1.0 / q) * np.cos(np.pi * ks)
            cols.append((Fraction(1, 2), ci, 0, v))
    cols.sort(key=lambda t: (t[0], t[1], t[2]))
    u = np.column_stack([t[3] for t in cols])

    blocks = _cyclic_blocks([len(o) for o in orbits], order)
    widths = {}
    for frac, _, _, _ in cols:
        widths[frac] = widths.get(frac, 0) + 1
    expected = [b.width for b in blocks]
    if [widths[f] for f in sorted(widths)] != expected:
        raise DecompositionError("cyclic basis columns do not match block widths")
    return BlockDecomposition(u, blocks, key=key)


def _eigenvalue_groups(evals, tol):
    """Indices of runs of (numerically) equal sorted eigenvalues."""
    scale = max(1.0, float(np.max(np.abs(evals))))
    groups = []
    start = 0
    for i in range(1, len(evals) + 1):
        if i == len(evals) or evals[i] - evals[i - 1] > tol * scale:
            groups.append(list(range(start, i)))
            start = i
    return groups


def _components(n, coupled):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in coupled:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return [comps[k] for k in sorted(comps)]


def _field_dim_from_rank(rank_found, r):
    for d in (1, 2, 4):
        if rank_found == r + d * r * (r - 1) // 2:
            return d
    return None


def numeric_decompose(group, seed: int = 0) -> BlockDecomposition:
    """Decompose an arbitrary subgroup from generic invariant matrices.

    A generic invariant matrix has r_i distinct eigenvalues of multiplicity
    k_i per block; a second generic matrix couples eigenspaces exactly when
    they belong to the same block.  The base field dimension follows from the
    dimension of the compressed colored space on each block.  The result is
    validated against the coloring dimension and generator conjugation, with
    three independent retries before giving up.
    """
    gens, p = as_generators(group)
    col = coloring(group)
    raw_basis = basis(col)
    gen_perms = [np.asarray(g.inverse().images, dtype=np.intp) - 1 for g in gens]

    last_err = None
    for attempt in range(3):
        rng = _rng.stream(seed, "numeric-decompose", attempt)
        try:
            dec = _numeric_attempt(col, raw_basis, gen_perms, p, rng)
        except DecompositionError as err:
            last_err = err
            continue
        dec = BlockDecomposition(dec.basis, dec.blocks, key=group_key(group))
        return dec
    raise DecompositionError(
        f"numeric decomposition failed after 3 attempts: {last_err}"
    )


def _random_invariant(col, rng):
    g = rng.standard_normal((col.p, col.p))
    return project(col, g + g.T)


def _numeric_attempt(col, raw_basis, gen_perms, p, rng):
    a = _random_invariant(col, rng)
    evals, vecs = np.linalg.eigh(a)
    groups = _eigenvalue_groups(evals, tol=1e-6)

    b = _random_invariant(col, rng)
    coupling = vecs.T @ b @ vecs
    scale = max(1.0, float(np.max(np.abs(coupling))))
    coupled = []
    for gi in range(len(groups)):
        for gj in range(gi + 1, len(groups)):
            sub = coupling[np.ix_(groups[gi], groups[gj])]
            if np.max(np.abs(sub)) > 1e-8 * scale:
                coupled.append((gi, gj))
    comps = _components(len(groups), coupled)

    specs = []
    for comp in comps:
        sizes = {len(groups[g]) for g in comp}
        if len(sizes) != 1:
            raise DecompositionError("inconsistent eigenvalue multiplicities in a block")
        k = sizes.pop()
        r = len(comp)
        cols = np.concatenate([groups[g] for g in comp])
        vblock = _refine_block_basis(vecs, [groups[g] for g in comp], b)
        if r == 1:
            d = 1
        else:
            images = np.stack(
                [(vblock.T @ q @ vblock).ravel() for q in raw_basis]
            )
            svals = np.linalg.svd(images, compute_uv=False)
            rank_found = int(np.sum(svals > 1e-8 * svals[0]))
            d = _field_dim_from_rank(rank_found, r)
            if d is None:
                raise DecompositionError(
                    f"compressed space dimension {rank_found} fits no field at rank {r}"
                )
        trivial = all(
            np.max(np.abs(vblock[perm, :] - vblock)) < 1e-8 for perm in gen_perms
        )
        specs.append((trivial, int(cols.min()), r, d, k, vblock))

    # trivial block first, then by original column position
    specs.sort(key=lambda t: (not t[0], t[1]))
    blocks = []
    columns = []
    start = 0
    for trivial, _, r, d, k, vblock in specs:
        width = r * k
        blocks.append(BlockSpec(rank=r, field_dim=d, mult=k, start=start, stop=start + width))
        columns.append(vblock)
        start += width
    u = np.column_stack(columns)
    dec = BlockDecomposition(u, blocks)

    if dec.dim != col.dim:
        raise DecompositionError(
            f"block dimensions sum to {dec.dim}, coloring dimension is {col.dim}"
        )
    if np.max(np.abs(u.T @ u - np.eye(p))) > 1e-12:
        raise DecompositionError("adapted basis lost orthogonality")
    for perm in gen_perms:
        moved = u.T @ u[perm, :]
        if dec.off_block_residual(moved) > 1e-10:
            raise DecompositionError("a generator does not preserve the blocks")
    check = _random_invariant(col, rng)
    res = dec.off_block_residual(dec.compress(check))
    if res > 1e-8 * max(1.0, float(np.max(np.abs(check)))):
        raise DecompositionError("random invariant matrix leaks outside the blocks")
    return dec


def _refine_block_basis(vecs, eigengroups, b):
    """Columns for one block: first eigenspace kept as computed, later
    eigenspaces re-framed by transporting the first through the second
    generic matrix, which aligns the field structure across cells."""
    w1 = vecs[:, eigengroups[0]]
    out = [w1]
    for g in eigengroups[1:]:
        vg = vecs[:, g]
        y = vg @ (vg.T @ (b @ w1))
        uu, ss, vvt = np.linalg.svd(y, full_matrices=False)
        if ss[-1] < 1e-10 * max(1.0, ss[0]):
            out.append(vg)  # transport degenerate; keep raw eigenvectors
        else:
            out.append(uu @ vvt)
    return np.column_stack(out)


_DECOMP_CACHE: dict = {}
_DECOMP_LOCK = threading.Lock()


def decompose(group) -> BlockDecomposition:
    """Decomposition of a subgroup's colored space, memoized by group.

    Cyclic groups use the exact basis; everything else the numeric method.
    """
    key = group_key(group)
    dec = _DECOMP_CACHE.get(key)
    if dec is not None:
        return dec
    if isinstance(group, Permutation):
        group = CyclicGroup(group)
    if isinstance(group, CyclicGroup):
        dec = cyclic_basis(group)
    else:
        dec = numeric_decompose(group)
    with _DECOMP_LOCK:
        _DECOMP_CACHE.setdefault(key, dec)
    return _DECOMP_CACHE[key]


def clear_decomposition_cache():
    with _DECOMP_LOCK:
        _DECOMP_CACHE.clear()


def block_values(dec: BlockDecomposition, x: np.ndarray, check: bool = True, rtol: float = 1e-8) -> BlockValues:
    """Representative eigenvalues and log-determinants of x in each block.

    The compressed block has each representative eigenvalue with exact
    multiplicity k, so sorting and averaging consecutive runs of k recovers
    the spectrum of the underlying Hermitian matrix.
    """
    x = np.asarray(x, dtype=float)
    y = dec.compress(x)
    scale = max(1.0, float(np.max(np.abs(x))))
    if check:
        res = dec.off_block_residual(y)
        if res > rtol * scale:
            raise DomainError(
                f"matrix is not invariant for this decomposition (off-block residual {res:.3e})"
            )
    eigenvalues = []
    log_abs = []
    signs = []
    for b in dec.blocks:
        sub = y[b.start : b.stop, b.start : b.stop]
        w = np.linalg.eigvalsh(0.5 * (sub + sub.T))
        grouped = w.reshape(b.rank, b.mult)
        if check and b.mult > 1:
            spread = float(np.max(grouped[:, -1] - grouped[:, 0]))
            if spread > 1e-6 * scale:
                raise DecompositionError(
                    f"eigenvalue multiplicity pattern violated (spread {spread:.3e})"
                )
        reps = grouped.mean(axis=1)
        eigenvalues.append(reps)
        with np.errstate(divide="ignore"):
            log_abs.append(float(np.sum(np.log(np.abs(reps)))))
        signs.append(float(np.prod(np.sign(reps))))
    smallest = min(float(r.min()) for r in eigenvalues)
    largest = max(float(r.max()) for r in eigenvalues)
    pos = smallest > 1e-10 * max(largest, 0.0)
    return BlockValues(
        eigenvalues=tuple(eigenvalues),
        log_abs_dets=np.array(log_abs),
        signs=np.array(signs),
        positive=pos,
    )


def log_phi_gamma(dec: BlockDecomposition, x: np.ndarray) -> float:
    """Log invariant measure density at a positive definite invariant x."""
    return block_values(dec, x).log_phi(dec)


def log_det_invariant(dec: BlockDecomposition, x: np.ndarray) -> float:
    """Log Det of a positive definite invariant x via its block spectrum."""
    return block_values(dec, x).log_det_ambient(dec)
