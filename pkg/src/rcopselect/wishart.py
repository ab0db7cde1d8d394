"""Wishart distributions on invariant cones and Gaussian data handling.

The invariant Wishart with shape eta and scale Sigma arises by projecting a
sum of Gaussian outer products onto the colored space.  Densities are taken
with respect to the trace-inner-product Euclidean measure on that space and
are returned in the log domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colored import coloring, membership, project
from .conefn import cone_constants, log_gamma_invariant
from .decomp import BlockDecomposition, block_values, decompose
from .errors import DomainError

_LOG_2 = float(np.log(2.0))


@dataclass(frozen=True)
class DataSet:
    """Observations of a centred Gaussian vector: scatter matrix and count.

    Raw samples are optional; the scatter matrix (sum of outer products of
    the observations) is sufficient for everything in this package.
    """

    scatter: np.ndarray
    n: int
    samples: np.ndarray | None = None

    def __post_init__(self):
        u = np.asarray(self.scatter, dtype=float)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DomainError("scatter matrix must be square")
        if np.max(np.abs(u - u.T)) > 1e-8 * max(1.0, np.max(np.abs(u))):
            raise DomainError("scatter matrix must be symmetric")
        if self.n < 0:
            raise DomainError("sample count must be nonnegative")
        object.__setattr__(self, "scatter", 0.5 * (u + u.T))
        if self.samples is not None:
            z = np.asarray(self.samples, dtype=float)
            if z.shape != (self.n, u.shape[0]):
                raise DomainError(
                    f"samples shape {z.shape} does not match n={self.n}, p={u.shape[0]}"
                )
            object.__setattr__(self, "samples", z)

    @property
    def p(self) -> int:
        return self.scatter.shape[0]

    @classmethod
    def from_samples(cls, z: np.ndarray) -> "DataSet":
        z = np.asarray(z, dtype=float)
        return cls(scatter=z.T @ z, n=z.shape[0], samples=z)


@dataclass(frozen=True)
class WishartParams:
    """Shape eta and invariant positive definite scale Sigma."""

    eta: float
    sigma: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        object.__setattr__(self, "sigma", 0.5 * (s + s.T))


def mle(group, data: DataSet, dec: BlockDecomposition | None = None) -> np.ndarray:
    """Maximum likelihood estimate of the invariant covariance: the
    projected scatter matrix divided by the sample count.

    Requires n at or above the block-structure threshold making the
    projected scatter almost surely positive definite, and raises if the
    particular data still fail blockwise positive definiteness.
    """
    dec = dec if dec is not None else decompose(group)
    cc = cone_constants(dec)
    if data.n < cc.n_min:
        raise DomainError(
            f"MLE needs at least {cc.n_min} observations for this model, got {data.n}"
        )
    sigma_hat = project(group, data.scatter) / data.n
    vals = block_values(dec, sigma_hat)
    if not vals.positive:
        raise DomainError("projected scatter matrix is singular on some block")
    return sigma_hat


def _prepare(dec, params):
    vals_sigma = block_values(dec, params.sigma)
    if not vals_sigma.positive:
        raise DomainError("scale matrix is not positive definite")
    cc = cone_constants(dec)
    eta_min = 2.0 * cc.shape_min_invariant
    if not params.eta > eta_min:
        raise DomainError(f"shape {params.eta} not above domain bound {eta_min}")
    log_norm = (
        -0.5 * params.eta * (dec.p * _LOG_2 + vals_sigma.log_det_ambient(dec))
        - log_gamma_invariant(dec, 0.5 * params.eta)
    )
    return vals_sigma, log_norm


def log_pdf(dec: BlockDecomposition, params: WishartParams, x: np.ndarray) -> float:
    """Log density of the invariant Wishart at an invariant positive
    definite x, with respect to the trace-measure on the colored space."""
    _, log_norm = _prepare(dec, params)
    vals_x = block_values(dec, x)
    if not vals_x.positive:
        raise DomainError("evaluation point is not positive definite")
    sigma_inv = np.linalg.inv(params.sigma)
    return float(
        0.5 * params.eta * vals_x.log_det_ambient(dec)
        - 0.5 * np.sum(x * sigma_inv)
        + log_norm
        + vals_x.log_phi(dec)
    )


def log_pdf_inverse(dec: BlockDecomposition, params: WishartParams, y: np.ndarray) -> float:
    """Log density of the inverse of an invariant Wishart variable at y."""
    _, log_norm = _prepare(dec, params)
    vals_y = block_values(dec, y)
    if not vals_y.positive:
        raise DomainError("evaluation point is not positive definite")
    sigma_inv = np.linalg.inv(params.sigma)
    y_inv = np.linalg.inv(y)
    return float(
        -0.5 * params.eta * vals_y.log_det_ambient(dec)
        - 0.5 * np.sum(y_inv * sigma_inv)
        + log_norm
        + vals_y.log_phi(dec)
    )


def sample_scatter(group, n: int, sigma: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw of the projected scatter of n Gaussian observations.

    This is the constructive definition of the invariant Wishart with
    integer shape n; n = 0 gives the zero matrix.
    """
    sigma = np.asarray(sigma, dtype=float)
    p = sigma.shape[0]
    if n == 0:
        return np.zeros((p, p))
    chol = np.linalg.cholesky(sigma)
    z = rng.standard_normal((n, p)) @ chol.T
    return project(group, z.T @ z)


def gaussian_dataset(sigma: np.ndarray, n: int, rng: np.random.Generator) -> DataSet:
    """n centred Gaussian observations with the given covariance."""
    sigma = np.asarray(sigma, dtype=float)
    p = sigma.shape[0]
    chol = np.linalg.cholesky(sigma)
    z = rng.standard_normal((n, p)) @ chol.T
    return DataSet.from_samples(z)


def circulant_sigma(p: int) -> np.ndarray:
    """Symmetric circulant covariance with first row 1 + 1/p on the
    diagonal and 1 - min(k, p-k)/p at circular distance k.

    Invariant under the full rotation group of the p-cycle and positive
    definite for every p.
    """
    if p < 1:
        raise DomainError("p must be positive")
    k = np.arange(p)
    dist = np.minimum(k, p - k)
    first = 1.0 - dist / p
    first[0] = 1.0 + 1.0 / p
    idx = (k[None, :] - k[:, None]) % p
    return first[np.minimum(idx, p - idx)]
