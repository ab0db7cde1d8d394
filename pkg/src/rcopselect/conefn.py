"""Gamma functions and Laplace-type integrals on invariant cones.

All values are returned in the log domain.  Domain bounds are enforced
strictly: a shape parameter on the boundary raises DomainError rather than
returning an infinite or extrapolated value.

Measure convention: integrals over a matrix cone use the Euclidean measure of
the trace inner product <x, y> = trace(xy), which differs from entrywise
Lebesgue measure by 2^(#off-diagonal coordinates / 2).  The classical real
multivariate gamma corresponds to the Lebesgue convention, so the single
block r = p, d = 1, k = 1 case here equals it times 2^(p(p-1)/4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .decomp import BlockDecomposition, BlockValues, block_values
from .errors import DomainError

_LOG_2PI = math.log(2.0 * math.pi)
_LOG_2 = math.log(2.0)


@dataclass(frozen=True)
class Hyperparams:
    """Prior hyperparameters: shape delta and positive definite scale D."""

    delta: float
    scale: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.scale, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DomainError("scale matrix must be square")
        object.__setattr__(self, "scale", d)


@dataclass(frozen=True)
class ConeConstants:
    """Aggregate constants of a block structure.

    det_log_k is the multiplicity-weighted log factor entering determinant
    scalings (sum of r_i k_i log k_i); measure_log_k the one entering the
    measure normalization (half the sum of block cone dimensions times
    log k_i); n_min the smallest sample count making an invariant Wishart
    absolutely continuous; the two bounds are strict lower bounds for shape
    parameters with and without the invariant measure factor.
    """

    det_log_k: float
    measure_log_k: float
    n_min: int
    shape_min_invariant: float
    shape_min_plain: float


def log_gamma_cone(rank: int, field_dim: int, lam: float) -> float:
    """Log gamma function of one irreducible cone of the given rank and
    base field dimension, at shape lam.

    Equals ((dim - rank)/2) log 2 pi plus the sum of log Gamma(lam - j d/2)
    for j = 0..rank-1; requires lam > (rank - 1) d / 2.
    """
    if rank < 1:
        raise DomainError(f"rank must be positive, got {rank}")
    bound = (rank - 1) * field_dim / 2.0
    if not lam > bound:
        raise DomainError(f"shape {lam} not above domain bound {bound}")
    dim = rank + rank * (rank - 1) * field_dim // 2
    j = np.arange(rank)
    return 0.5 * (dim - rank) * _LOG_2PI + float(np.sum(gammaln(lam - 0.5 * field_dim * j)))


def cone_constants(blocks) -> ConeConstants:
    """Constants for a block list or decomposition."""
    blocks = getattr(blocks, "blocks", blocks)
    det_log_k = sum(b.rank * b.mult * math.log(b.mult) for b in blocks)
    measure_log_k = 0.5 * sum(b.dim_cone * math.log(b.mult) for b in blocks)
    n_min = max(-(-b.rank * b.field_dim // b.mult) for b in blocks)
    shape_min_invariant = max((b.rank - 1) * b.field_dim / (2.0 * b.mult) for b in blocks)
    shape_min_plain = max(-1.0 / b.mult for b in blocks)
    return ConeConstants(
        det_log_k=det_log_k,
        measure_log_k=measure_log_k,
        n_min=n_min,
        shape_min_invariant=shape_min_invariant,
        shape_min_plain=shape_min_plain,
    )


def log_gamma_invariant(dec, lam: float) -> float:
    """Log gamma function of the full invariant cone at shape lam.

    This is the integral of Det(x)^lam times the invariant measure against
    exp(-trace x) over the cone; it requires lam strictly above
    max (r_i - 1) d_i / (2 k_i).
    """
    blocks = getattr(dec, "blocks", dec)
    cc = cone_constants(blocks)
    if not lam > cc.shape_min_invariant:
        raise DomainError(
            f"shape {lam} not above domain bound {cc.shape_min_invariant}"
        )
    total = -cc.det_log_k * lam + cc.measure_log_k
    for b in blocks:
        total += log_gamma_cone(b.rank, b.field_dim, b.mult * lam)
    return float(total)


def log_laplace_integral(dec: BlockDecomposition, lambdas, y: np.ndarray, y_values: BlockValues | None = None) -> float:
    """Log of the integral of the product of block determinants to the
    powers lambdas against exp(-trace(y x)) over the cone.

    Each lambda_i must exceed -1 and y must be positive definite invariant.
    """
    blocks = dec.blocks
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.shape != (len(blocks),):
        raise DomainError(f"expected {len(blocks)} exponents, got {lambdas.shape}")
    if np.min(lambdas) <= -1.0:
        raise DomainError("every exponent must exceed -1")
    vals = y_values if y_values is not None else block_values(dec, y)
    log_dets = vals.log_dets()
    cc = cone_constants(blocks)
    total = -cc.measure_log_k
    for b, lam, ld in zip(blocks, lambdas, log_dets):
        shape = lam + b.dim_cone / b.rank
        total += -b.rank * lam * math.log(b.mult)
        total += log_gamma_cone(b.rank, b.field_dim, shape)
        total += -shape * ld
    return float(total)


def log_prior_normalizer(dec: BlockDecomposition, delta: float, scale: np.ndarray, scale_values: BlockValues | None = None) -> float:
    """Log normalizing constant of the conjugate prior on concentration
    matrices: the integral of Det(K)^((delta-2)/2) exp(-trace(K D)/2) over
    the invariant cone, for D = scale positive definite invariant.

    Requires delta > 2 max(1 - 1/k_i).
    """
    blocks = dec.blocks
    cc = cone_constants(blocks)
    lam = 0.5 * (delta - 2.0)
    if not lam > cc.shape_min_plain:
        raise DomainError(
            f"delta {delta} not above domain bound {2.0 * (1.0 + cc.shape_min_plain)}"
        )
    vals = scale_values if scale_values is not None else block_values(dec, scale)
    log_dets = vals.log_dets()
    log_det_ambient = float(sum(b.mult * ld for b, ld in zip(blocks, log_dets)))
    log_phi = float(-sum((b.dim_cone / b.rank) * ld for b, ld in zip(blocks, log_dets)))
    dim_total = sum(b.dim_cone for b in blocks)

    total = -cc.det_log_k * lam - cc.measure_log_k
    for b in blocks:
        total += log_gamma_cone(b.rank, b.field_dim, b.mult * lam + b.dim_cone / b.rank)
    # substituting y = D/2 into the plain-power integral leaves these powers of 2
    total += (dec.p * lam + dim_total) * _LOG_2
    total += -lam * log_det_ambient + log_phi
    return float(total)
