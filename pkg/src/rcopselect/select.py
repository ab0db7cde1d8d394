"""Bayesian model selection over permutation-symmetry models.

Each model is a subgroup; its marginal likelihood is a ratio of prior
normalizing constants evaluated at the prior scale and at the scale updated
by the projected scatter matrix.  Small catalogs are scored exhaustively;
the space of cyclic subgroups is explored by two Metropolis-Hastings
samplers, one walking on the groups themselves and one on permutations with
a totient-weighted estimator correcting for the many-to-one map from
generators to groups.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .colored import Coloring, coloring, project
from .conefn import log_prior_normalizer
from .decomp import BlockDecomposition, _cyclic_basis_from_orbits, decompose
from .errors import CapExceededError, DomainError
from .perm import (
    CyclicGroup,
    Permutation,
    PermutationGroup,
    canonical_cyclic_images,
    coprime_residues,
    enumerate_cyclic_subgroups,
    identity,
    parse_cycles,
)
from .wishart import DataSet

_NU_ORDER_CAP = 1000  # beyond this order, skip canonical-generator search


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    group: object  # CyclicGroup or PermutationGroup


@dataclass(frozen=True)
class ModelCatalog:
    """Ordered list of candidate models; order breaks posterior ties."""

    name: str
    entries: tuple

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self):
        return [e.label for e in self.entries]


def catalog_p4() -> ModelCatalog:
    """The 22 symmetry models on 4 variables, smallest groups first.

    Single-generator models are stored as cyclic groups, the rest by their
    generator pairs; the first 17 entries have the colorings realizable by a
    cyclic subgroup.
    """
    cyc = [
        "",  # trivial
        "(1,2)", "(1,3)", "(1,4)", "(2,3)", "(2,4)", "(3,4)",
    ]
    two_gen_a = [
        ("(1,2,3)", "(1,2)"), ("(1,2,4)", "(1,2)"),
        ("(1,3,4)", "(1,3)"), ("(2,3,4)", "(2,3)"),
    ]
    cyc_double = ["(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"]
    two_gen_b = [
        ("(1,2,3,4)", "(1,3)"), ("(1,2,4,3)", "(1,4)"), ("(1,3,2,4)", "(1,2)"),
    ]
    two_gen_c = [
        ("(1,2)", "(3,4)"), ("(1,3)", "(2,4)"), ("(1,4)", "(2,3)"),
        ("(1,2)(3,4)", "(1,4)(2,3)"),
        ("(1,2)", "(1,2,3,4)"),
    ]
    entries = []

    def add(group):
        entries.append(CatalogEntry(label=f"G{len(entries) + 1}", group=group))

    for s in cyc:
        add(CyclicGroup(parse_cycles(s, 4)))
    for a, b in two_gen_a:
        add(PermutationGroup([parse_cycles(a, 4), parse_cycles(b, 4)], p=4))
    for s in cyc_double:
        add(CyclicGroup(parse_cycles(s, 4)))
    for a, b in two_gen_b:
        add(PermutationGroup([parse_cycles(a, 4), parse_cycles(b, 4)], p=4))
    for a, b in two_gen_c:
        add(PermutationGroup([parse_cycles(a, 4), parse_cycles(b, 4)], p=4))
    return ModelCatalog(name="p4-all22", entries=tuple(entries))


def catalog_cyclic(p: int, cap: int = 8) -> ModelCatalog:
    """All cyclic subgroup models on p variables (enumeration-capped)."""
    entries = tuple(
        CatalogEntry(label=str(c.generator), group=c)
        for c in enumerate_cyclic_subgroups(p, cap=cap)
    )
    return ModelCatalog(name=f"cyclic-p{p}", entries=entries)


def log_post_unnorm(group, data: DataSet, delta: float, scale: np.ndarray,
                    dec: BlockDecomposition | None = None) -> float:
    """Log unnormalized posterior of one model: the log ratio of prior
    normalizing constants at the updated and original hyperparameters.

    The scatter matrix is projected onto the model's colored space first;
    this leaves the value unchanged whenever the update is evaluated inside
    that space, and keeps every determinant computation blockwise.
    """
    dec = dec if dec is not None else decompose(group)
    u_eff = project(group, data.scatter)
    scale = np.asarray(scale, dtype=float)
    posterior_scale = scale + u_eff
    return (
        log_prior_normalizer(dec, delta + data.n, posterior_scale)
        - log_prior_normalizer(dec, delta, scale)
    )


@dataclass(frozen=True)
class PosteriorTable:
    """Models with posterior probabilities, sorted descending.

    Ties keep the catalog (or first-visit) order.  metadata records the run
    configuration needed to reproduce the table.
    """

    labels: tuple
    probabilities: np.ndarray
    log_unnorm: np.ndarray
    metadata: dict = field(default_factory=dict)

    def top(self, k: int):
        k = min(k, len(self.labels))
        return [(self.labels[i], float(self.probabilities[i])) for i in range(k)]

    def probability_of(self, label: str) -> float:
        try:
            return float(self.probabilities[self.labels.index(label)])
        except ValueError:
            return 0.0


def _softmax(logs: np.ndarray) -> np.ndarray:
    m = np.max(logs)
    w = np.exp(logs - m)
    return w / np.sum(w)


def exhaustive_posterior(catalog: ModelCatalog, data: DataSet, delta: float,
                         scale: np.ndarray, metadata: dict | None = None) -> PosteriorTable:
    """Exact posterior over a catalog under the uniform model prior."""
    logs = np.array(
        [log_post_unnorm(e.group, data, delta, scale) for e in catalog.entries]
    )
    probs = _softmax(logs)
    order = np.argsort(-probs, kind="stable")
    meta = {"catalog": catalog.name, "delta": delta, "n": data.n, "p": data.p}
    if metadata:
        meta.update(metadata)
    return PosteriorTable(
        labels=tuple(catalog.entries[i].label for i in order),
        probabilities=probs[order],
        log_unnorm=logs[order],
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# Metropolis-Hastings over cyclic symmetry models


def _factorize(n: int):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _order_and_totient(images):
    """Group order and totient from cycle lengths, without forming powers."""
    p = len(images)
    seen = [False] * p
    fac = {}
    order = 1
    for i in range(p):
        if seen[i]:
            continue
        ln = 1
        seen[i] = True
        j = images[i] - 1
        while j != i:
            ln += 1
            seen[j] = True
            j = images[j] - 1
        order = math.lcm(order, ln)
        for q, e in _factorize(ln).items():
            fac[q] = max(fac.get(q, 0), e)
    phi = 1
    for q, e in fac.items():
        phi *= (q - 1) * q ** (e - 1)
    return order, phi


def _min_labels(perm: np.ndarray) -> np.ndarray:
    """Smallest index in the forward orbit of each point of an index map."""
    lab = np.arange(len(perm))
    cur = perm.copy()
    steps = max(1, int(math.ceil(math.log2(len(perm) + 1))) + 1)
    for _ in range(steps):
        lab = np.minimum(lab, lab[cur])
        cur = cur[cur]
    return lab


def _coloring_key(images):
    """Canonical key of the coloring of the cyclic group of a permutation.

    Distinct cyclic subgroups induce distinct colorings, so the pair of
    orbit-minimum label vectors over vertices and unordered pairs is a
    perfect group identifier even when the canonical generator is too
    expensive to compute.
    """
    p = len(images)
    perm = np.asarray(images, dtype=np.intp) - 1
    vlab = _min_labels(perm)
    iu, ju = np.triu_indices(p, k=1)
    pid = np.zeros((p, p), dtype=np.intp)
    pid[iu, ju] = np.arange(len(iu))
    pid[ju, iu] = pid[iu, ju]
    a, b = perm[iu], perm[ju]
    pperm = pid[np.minimum(a, b), np.maximum(a, b)]
    plab = _min_labels(pperm)
    return ("col", vlab.tobytes(), plab.tobytes())


class _ModelRegistry:
    """Per-run registry of visited cyclic models with cached posteriors."""

    def __init__(self, data: DataSet, delta: float, scale: np.ndarray):
        self.data = data
        self.delta = float(delta)
        self.scale = np.asarray(scale, dtype=float)
        self.by_key: dict = {}
        self.records: list = []

    def _evaluate(self, images, order):
        """Posterior and block data for the cyclic group of a permutation."""
        if order <= _NU_ORDER_CAP:
            nu, _ = canonical_cyclic_images(tuple(images))
            c = CyclicGroup(Permutation(nu))
            dec = decompose(c)
            col = coloring(c)
            label = str(c.generator)
        else:
            nu = None
            perm = Permutation(images)
            c = None
            col = coloring([perm])
            orbits = _sigma_orbits(images)
            dec = _cyclic_basis_from_orbits(orbits, order, len(images))
            label = str(perm)
        u_eff = project(col, self.data.scatter)
        lp = (
            log_prior_normalizer(dec, self.delta + self.data.n, self.scale + u_eff)
            - log_prior_normalizer(dec, self.delta, self.scale)
        )
        return nu, label, lp

    def record_for(self, images):
        """Record for the cyclic group generated by an image tuple."""
        images = tuple(images)
        order, phi = _order_and_totient(images)
        if order <= _NU_ORDER_CAP:
            nu, _ = canonical_cyclic_images(images)
            key = ("nu", nu)
        else:
            nu = None
            key = _coloring_key(images)
        rec = self.by_key.get(key)
        if rec is None:
            _, label, lp = self._evaluate(images, order)
            rec = _Record(
                idx=len(self.records), nu=nu, label=label, order=order,
                phi=phi, logpost=lp, key=key,
            )
            self.by_key[key] = rec
            self.records.append(rec)
        return rec


def _sigma_orbits(images):
    p = len(images)
    seen = [False] * p
    out = []
    for i in range(1, p + 1):
        if seen[i - 1]:
            continue
        orbit = [i]
        seen[i - 1] = True
        j = images[i - 1]
        while j != i:
            orbit.append(j)
            seen[j - 1] = True
            j = images[j - 1]
        out.append(tuple(orbit))
    return out


class _Record:
    __slots__ = ("idx", "nu", "label", "order", "phi", "logpost", "key",
                 "neighbor_keys", "g_counts")

    def __init__(self, idx, nu, label, order, phi, logpost, key):
        self.idx = idx
        self.nu = nu
        self.label = label
        self.order = order
        self.phi = phi
        self.logpost = logpost
        self.key = key
        self.neighbor_keys = None
        self.g_counts = None


def _ensure_neighbors(rec: _Record, registry: _ModelRegistry):
    """Enumerate the groups generated by composing the canonical generator
    with each transposition; used for both directions of the proposal ratio."""
    if rec.neighbor_keys is not None:
        return
    if rec.nu is None:
        raise CapExceededError(
            f"group order {rec.order} exceeds the canonical-generator cap"
        )
    nu = rec.nu
    p = len(nu)
    keys = []
    for a in range(p - 1):
        for b in range(a + 1, p):
            prod = list(nu)
            prod[a], prod[b] = prod[b], prod[a]
            key, _ = canonical_cyclic_images(tuple(prod))
            keys.append(("nu", key))
    rec.neighbor_keys = keys
    rec.g_counts = Counter(keys)


@dataclass
class ChainTrace:
    """Trace of one sampler run over cyclic symmetry models.

    Per-step data reference the registry index of the model; labels hold the
    canonical generator of each model (an arbitrary generator past the
    order cap for canonical search).  Weights are reciprocal generator
    counts, used by the permutation-walk estimator.
    """

    algorithm: str
    p: int
    steps: int
    seed: int
    delta: float
    n: int
    start_label: str
    model_of_step: np.ndarray
    accepted: np.ndarray
    model_labels: tuple
    model_logpost: np.ndarray
    model_phi: np.ndarray
    model_order: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return float(np.mean(self.accepted))

    def logpost_of_step(self) -> np.ndarray:
        return self.model_logpost[self.model_of_step]

    def weight_of_step(self) -> np.ndarray:
        return 1.0 / self.model_phi[self.model_of_step]

    def effective_steps(self) -> float:
        """Sum of per-step weights; the denominator of the weighted estimate."""
        return float(np.sum(self.weight_of_step()))

    def visit_counts(self, discard: int = 0) -> np.ndarray:
        return np.bincount(
            self.model_of_step[discard:], minlength=len(self.model_labels)
        )


def _chunked_uniforms(rng, total, m):
    """Yield per-step (transposition index, uniform) pairs in blocks."""
    block = 1 << 15
    done = 0
    while done < total:
        b = min(block, total - done)
        js = rng.integers(0, m, size=b)
        us = rng.random(size=b)
        yield from zip(js.tolist(), us.tolist())
        done += b


def _start_images(start, p):
    if start is None:
        return tuple(range(1, p + 1)), "id"
    if isinstance(start, CyclicGroup):
        return start.generator.images, str(start.generator)
    if isinstance(start, Permutation):
        return start.images, str(start)
    raise DomainError("start must be a CyclicGroup or Permutation")


def mh_cyclic(data: DataSet, delta: float, scale: np.ndarray, steps: int,
              seed: int = 0, start=None) -> ChainTrace:
    """Metropolis-Hastings walk directly on cyclic symmetry models.

    From the current group, compose its canonical generator with a uniform
    transposition and propose the group generated by the product.  The
    acceptance ratio weighs the posterior ratio by the proposal probabilities
    in both directions, counted over all transpositions.  Proposals whose
    reverse move is impossible are rejected outright.
    """
    p = data.p
    m = p * (p - 1) // 2
    registry = _ModelRegistry(data, delta, scale)
    start_images, start_label = _start_images(start, p)
    cur = registry.record_for(start_images)
    _ensure_neighbors(cur, registry)

    rng = _rng.stream(seed, "mh-cyclic")
    model_of_step = np.empty(steps, dtype=np.int32)
    accepted = np.empty(steps, dtype=bool)
    log = math.log
    for t, (j, u) in enumerate(_chunked_uniforms(rng, steps, m)):
        key = cur.neighbor_keys[j]
        if key[1] == cur.nu:
            accepted[t] = True  # self-proposal, always accepted
            model_of_step[t] = cur.idx
            continue
        prop = registry.by_key.get(key)
        if prop is None:
            prop = registry.record_for(key[1])
        _ensure_neighbors(prop, registry)
        reverse = prop.g_counts.get(cur.key, 0)
        if reverse == 0:
            accepted[t] = False
            model_of_step[t] = cur.idx
            continue
        forward = cur.g_counts[key]
        log_alpha = prop.logpost - cur.logpost + log(reverse) - log(forward)
        if log_alpha >= 0.0 or log(u) < log_alpha:
            cur = prop
            accepted[t] = True
        else:
            accepted[t] = False
        model_of_step[t] = cur.idx
    return _finish_trace("cyclic", registry, data, delta, steps, seed,
                         start_label, model_of_step, accepted)


def mh_sym(data: DataSet, delta: float, scale: np.ndarray, steps: int,
           seed: int = 0, start=None) -> ChainTrace:
    """Metropolis-Hastings random walk on permutations.

    Each step multiplies the current permutation by a uniform transposition;
    the proposal is symmetric, so the acceptance ratio is the posterior
    ratio of the generated groups alone.  Posterior mass per group is
    recovered from visit counts reweighted by reciprocal generator counts.
    """
    p = data.p
    m = p * (p - 1) // 2
    pairs = [(a, b) for a in range(p - 1) for b in range(a + 1, p)]
    registry = _ModelRegistry(data, delta, scale)
    start_images, start_label = _start_images(start, p)
    sigma = tuple(start_images)
    cur = registry.record_for(sigma)
    perm_cache = {sigma: cur}

    rng = _rng.stream(seed, "mh-sym")
    model_of_step = np.empty(steps, dtype=np.int32)
    accepted = np.empty(steps, dtype=bool)
    log = math.log
    for t, (j, u) in enumerate(_chunked_uniforms(rng, steps, m)):
        a, b = pairs[j]
        prod = list(sigma)
        prod[a], prod[b] = prod[b], prod[a]
        sigma2 = tuple(prod)
        prop = perm_cache.get(sigma2)
        if prop is None:
            prop = registry.record_for(sigma2)
            if len(perm_cache) < 500_000:
                perm_cache[sigma2] = prop
        log_alpha = prop.logpost - cur.logpost
        if log_alpha >= 0.0 or log(u) < log_alpha:
            sigma = sigma2
            cur = prop
            accepted[t] = True
        else:
            accepted[t] = False
        model_of_step[t] = cur.idx
    return _finish_trace("sym", registry, data, delta, steps, seed,
                         start_label, model_of_step, accepted)


def _finish_trace(algorithm, registry, data, delta, steps, seed, start_label,
                  model_of_step, accepted) -> ChainTrace:
    recs = registry.records
    return ChainTrace(
        algorithm=algorithm,
        p=data.p,
        steps=steps,
        seed=seed,
        delta=delta,
        n=data.n,
        start_label=start_label,
        model_of_step=model_of_step,
        accepted=accepted,
        model_labels=tuple(r.label for r in recs),
        model_logpost=np.array([r.logpost for r in recs]),
        model_phi=np.array([r.phi for r in recs], dtype=float),
        model_order=np.array([r.order for r in recs]),
        metadata={"models_visited": len(recs)},
    )


def estimate_posterior(trace: ChainTrace, discard: int = 0) -> PosteriorTable:
    """Posterior estimate from a trace.

    The group walk estimates by plain visit frequencies.  The permutation
    walk weighs each visit by the reciprocal of the group's generator count,
    since a group is reachable through that many permutations of a shared
    order.  Discard removes leading steps before counting.
    """
    counts = trace.visit_counts(discard)
    if trace.algorithm == "cyclic":
        weights = counts.astype(float)
    else:
        weights = counts / trace.model_phi
    total = float(np.sum(weights))
    if total <= 0:
        raise DomainError("trace has no retained steps")
    probs = weights / total
    order = np.argsort(-probs, kind="stable")
    keep = [i for i in order if counts[i] > 0]
    meta = {
        "algorithm": trace.algorithm,
        "steps": trace.steps,
        "discard": discard,
        "seed": trace.seed,
        "delta": trace.delta,
        "n": trace.n,
        "acceptance_rate": trace.acceptance_rate,
        "effective_steps": float(np.sum(counts / trace.model_phi)),
    }
    return PosteriorTable(
        labels=tuple(trace.model_labels[i] for i in keep),
        probabilities=np.array([probs[i] for i in keep]),
        log_unnorm=np.array([trace.model_logpost[i] for i in keep]),
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# Partition comparison


def _pooled_labels(x) -> np.ndarray:
    if isinstance(x, Coloring):
        return x.pooled_labels()
    return coloring(x).pooled_labels()


def ari(a, b) -> float:
    """Adjusted Rand index between two colorings of the same vertex set.

    Vertices and unordered pairs are pooled into one labeled set and the
    standard contingency-table formula is applied.  Accepts groups or
    colorings.
    """
    la, lb = _pooled_labels(a), _pooled_labels(b)
    if len(la) != len(lb):
        raise DomainError("colorings describe different vertex sets")
    cont = Counter(zip(la.tolist(), lb.tolist()))

    def comb2(x):
        return x * (x - 1) // 2

    sum_cells = sum(comb2(c) for c in cont.values())
    acounts = Counter(la.tolist())
    bcounts = Counter(lb.tolist())
    sum_a = sum(comb2(c) for c in acounts.values())
    sum_b = sum(comb2(c) for c in bcounts.values())
    total = comb2(len(la))
    expected = sum_a * sum_b / total
    max_index = 0.5 * (sum_a + sum_b)
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))
