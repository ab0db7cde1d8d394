"""Permutations of {1,...,p}, cyclic subgroups, and transposition moves.

Composition is fixed throughout the package as (a * b)(i) = a(b(i)), i.e. b
acts first.  Cyclic subgroups are identified by a canonical generator: the
lexicographically smallest image tuple among the generators of the group.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter

from .errors import CapExceededError

_CYCLE_TOKEN = re.compile(r"\(([^()]*)\)")
_CYCLE_SHAPE = re.compile(r"^(\(\d+(,\d+)*\))+$")


class Permutation:
    """Immutable permutation of {1,...,p} stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images

    @property
    def p(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) = self(other(i))
        si = self.images
        return Permutation(si[j - 1] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        n = self.order()
        k %= n
        out = identity(self.p)
        for _ in range(k):
            out = self * out
        return out

    def cycles(self):
        """Nontrivial cycles, each starting at its smallest element, sorted."""
        seen = [False] * self.p
        out = []
        for i in range(1, self.p + 1):
            if seen[i - 1]:
                continue
            cyc = [i]
            seen[i - 1] = True
            j = self(i)
            while j != i:
                cyc.append(j)
                seen[j - 1] = True
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_lengths(self):
        """Lengths of all cycles including fixed points."""
        counts = []
        seen = [False] * self.p
        for i in range(1, self.p + 1):
            if seen[i - 1]:
                continue
            n = 1
            seen[i - 1] = True
            j = self(i)
            while j != i:
                n += 1
                seen[j - 1] = True
                j = self(j)
            counts.append(n)
        return counts

    def order(self) -> int:
        return math.lcm(*self.cycle_lengths())

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.images, start=1))

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self.images!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)


def identity(p: int) -> Permutation:
    return Permutation(range(1, p + 1))


def parse_cycles(text: str, p: int) -> Permutation:
    """Parse disjoint cycle notation like "(1,2,3)(4,5)" into a permutation.

    The empty string and "id" denote the identity.  Cycles must be disjoint,
    entries must lie in 1..p, and the string must be fully parenthesized.
    """
    s = text.strip().replace(" ", "")
    if s in ("", "id", "()"):
        return identity(p)
    if not _CYCLE_SHAPE.match(s):
        raise ValueError(f"malformed cycle string: {text!r}")
    images = list(range(1, p + 1))
    seen = set()
    for token in _CYCLE_TOKEN.findall(s):
        entries = [int(t) for t in token.split(",")]
        for e in entries:
            if not 1 <= e <= p:
                raise ValueError(f"cycle entry {e} outside 1..{p} in {text!r}")
            if e in seen:
                raise ValueError(f"repeated entry {e} in {text!r}")
            seen.add(e)
        for a, b in zip(entries, entries[1:] + entries[:1]):
            images[a - 1] = b
    return Permutation(images)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Composition with b acting first: compose(a, b)(i) = a(b(i))."""
    return a * b


def transpositions(p: int):
    """All p(p-1)/2 transpositions of {1,...,p} in lexicographic order."""
    out = []
    for a in range(1, p):
        for b in range(a + 1, p + 1):
            images = list(range(1, p + 1))
            images[a - 1], images[b - 1] = b, a
            out.append(Permutation(images))
    return out


def totient(n: int) -> int:
    """Euler's totient by trial-division factorization."""
    out = n
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            out -= out // d
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out -= out // m
    return out


def coprime_residues(n: int):
    """Residues 1 <= k <= n with gcd(k, n) = 1."""
    return [k for k in range(1, n + 1) if math.gcd(k, n) == 1]


class CyclicGroup:
    """Cyclic permutation subgroup identified by its canonical generator.

    The canonical generator is the lexicographically smallest image tuple
    among sigma^k with gcd(k, order) = 1, so two cyclic groups compare equal
    exactly when they are the same subgroup.
    """

    __slots__ = ("generator", "order", "p")

    def __init__(self, generator: Permutation):
        images, order = canonical_cyclic_images(generator.images)
        self.generator = Permutation(images)
        self.order = order
        self.p = generator.p

    @property
    def key(self):
        return self.generator.images

    def elements(self):
        """All elements as permutations, powers of the canonical generator."""
        out = [identity(self.p)]
        cur = self.generator
        while not cur.is_identity():
            out.append(cur)
            cur = self.generator * cur
        return out

    def generator_count(self) -> int:
        """Number of generators of the group (Euler totient of the order)."""
        return totient(self.order)

    def orbits(self):
        """Vertex orbits in first-occurrence order, each walked generator-wise.

        Orbit c is the tuple (i_c, s(i_c), s(s(i_c)), ...) for the canonical
        generator s, starting from the smallest unvisited vertex.
        """
        seen = [False] * self.p
        out = []
        for i in range(1, self.p + 1):
            if seen[i - 1]:
                continue
            orbit = [i]
            seen[i - 1] = True
            j = self.generator(i)
            while j != i:
                orbit.append(j)
                seen[j - 1] = True
                j = self.generator(j)
            out.append(tuple(orbit))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicGroup) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"CyclicGroup({self.generator})"

    def __str__(self) -> str:
        return str(self.generator)


def canonical_cyclic_images(images: tuple):
    """Canonical generator images and order of the cyclic group <images>.

    Works on raw image tuples; this is the hot path of the Monte Carlo
    samplers.  Returns (canonical_images, order).
    """
    p = len(images)
    ident = tuple(range(1, p + 1))
    if images == ident:
        return ident, 1
    powers = []
    cur = images
    while cur != ident:
        powers.append(cur)
        cur = tuple(images[j - 1] for j in cur)
    order = len(powers) + 1
    best = min(powers[k - 1] for k in coprime_residues(order) if k < order)
    return best, order


def cyclic_group(s: Permutation) -> CyclicGroup:
    """The cyclic group generated by s."""
    return CyclicGroup(s)


def closure(generators, p: int | None = None, cap: int = 1_000_000):
    """All elements generated by the given permutations, found by breadth
    first multiplication.  Raises CapExceededError past cap elements."""
    gens = list(generators)
    if p is None:
        if not gens:
            raise ValueError("p is required for an empty generator list")
        p = gens[0].p
    if any(g.p != p for g in gens):
        raise ValueError("generators act on different numbers of points")
    ident = tuple(range(1, p + 1))
    seen = {ident}
    frontier = [ident]
    gimages = [g.images for g in gens]
    while frontier:
        nxt = []
        for cur in frontier:
            for gi in gimages:
                prod = tuple(cur[j - 1] for j in gi)
                if prod not in seen:
                    if len(seen) >= cap:
                        raise CapExceededError(
                            f"group closure exceeded cap of {cap} elements"
                        )
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return frozenset(Permutation(im) for im in seen)


class PermutationGroup:
    """Permutation subgroup given by generators, with its full element set."""

    __slots__ = ("generators", "p", "elements")

    def __init__(self, generators, p: int | None = None, cap: int = 1_000_000):
        gens = list(generators)
        if p is None:
            if not gens:
                raise ValueError("p is required for an empty generator list")
            p = gens[0].p
        self.generators = tuple(gens)
        self.p = p
        self.elements = closure(gens, p=p, cap=cap)

    @property
    def order(self) -> int:
        return len(self.elements)

    def orbits(self):
        """Vertex orbits in first-occurrence order."""
        labels = _orbit_labels(self.p, [g.images for g in self.generators])
        out = {}
        for i in range(1, self.p + 1):
            out.setdefault(labels[i - 1], []).append(i)
        return [tuple(v) for v in out.values()]

    def __eq__(self, other) -> bool:
        return isinstance(other, PermutationGroup) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        gens = ",".join(str(g) for g in self.generators) or "id"
        return f"PermutationGroup({gens})"


def _orbit_labels(p, gens_images):
    """Union-find orbit labels (smallest member) for vertices 0..p-1."""
    parent = list(range(p))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gi in gens_images:
        for i in range(p):
            a, b = find(i), find(gi[i] - 1)
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(i) for i in range(p)]


def enumerate_cyclic_subgroups(p: int, cap: int = 8):
    """All cyclic subgroups of the symmetric group on p points.

    Enumerates the p! permutations and collapses each to its canonical
    generator, so the cost is factorial; refuses p above the cap.
    """
    if p > cap:
        raise CapExceededError(f"cyclic subgroup enumeration capped at p <= {cap}")
    seen = {}
    for images in itertools.permutations(range(1, p + 1)):
        key, _ = canonical_cyclic_images(images)
        if key not in seen:
            seen[key] = CyclicGroup(Permutation(key))
    return sorted(seen.values(), key=lambda c: (c.order, c.key))


def proposal_distribution(c: CyclicGroup):
    """Distribution over cyclic groups reachable from c in one move.

    A move composes the canonical generator with a uniformly chosen
    transposition t and takes the group generated by the product, so the
    probability of each target is its share of the p(p-1)/2 transpositions.
    """
    nu = c.generator.images
    p = c.p
    counts = Counter()
    total = 0
    for a in range(p - 1):
        for b in range(a + 1, p):
            prod = list(nu)
            prod[a], prod[b] = prod[b], prod[a]
            key, _ = canonical_cyclic_images(tuple(prod))
            counts[key] += 1
            total += 1
    return {
        CyclicGroup(Permutation(key)): cnt / total for key, cnt in counts.items()
    }
