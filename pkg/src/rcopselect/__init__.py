"""Model selection among Gaussian models invariant under permutation symmetry.

A centred Gaussian model on p variables can be constrained to covariance
matrices invariant under a subgroup of coordinate permutations.  This package
enumerates such models, block-diagonalizes their colored matrix spaces,
evaluates the exact marginal posterior under a Diaconis-Ylvisaker prior, and
searches large model spaces with Metropolis-Hastings samplers.
"""

from .colored import Coloring, basis, coloring, membership, orthonormal_basis, project
from .conefn import (
    Hyperparams,
    cone_constants,
    log_gamma_cone,
    log_gamma_invariant,
    log_laplace_integral,
    log_prior_normalizer,
)
from .datasets import FRETS_N, FRETS_SCATTER, FRETS_VARIABLES, frets_dataset
from .decomp import (
    BlockDecomposition,
    BlockSpec,
    BlockValues,
    block_values,
    clear_decomposition_cache,
    cyclic_basis,
    cyclic_structure_constants,
    decompose,
    log_det_invariant,
    log_phi_gamma,
    numeric_decompose,
)
from .errors import CapExceededError, DecompositionError, DomainError
from .perm import (
    CyclicGroup,
    Permutation,
    PermutationGroup,
    closure,
    cyclic_group,
    enumerate_cyclic_subgroups,
    identity,
    parse_cycles,
    proposal_distribution,
    totient,
    transpositions,
)
from .select import (
    CatalogEntry,
    ChainTrace,
    ModelCatalog,
    PosteriorTable,
    ari,
    catalog_cyclic,
    catalog_p4,
    estimate_posterior,
    exhaustive_posterior,
    log_post_unnorm,
    mh_cyclic,
    mh_sym,
)
from .wishart import (
    DataSet,
    WishartParams,
    circulant_sigma,
    gaussian_dataset,
    log_pdf,
    log_pdf_inverse,
    mle,
    sample_scatter,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "BlockSpec",
    "BlockValues",
    "CapExceededError",
    "CatalogEntry",
    "ChainTrace",
    "Coloring",
    "CyclicGroup",
    "DataSet",
    "DecompositionError",
    "DomainError",
    "FRETS_N",
    "FRETS_SCATTER",
    "FRETS_VARIABLES",
    "Hyperparams",
    "ModelCatalog",
    "Permutation",
    "PermutationGroup",
    "PosteriorTable",
    "WishartParams",
    "ari",
    "basis",
    "block_values",
    "catalog_cyclic",
    "catalog_p4",
    "circulant_sigma",
    "clear_decomposition_cache",
    "closure",
    "coloring",
    "cone_constants",
    "cyclic_basis",
    "cyclic_group",
    "cyclic_structure_constants",
    "decompose",
    "enumerate_cyclic_subgroups",
    "estimate_posterior",
    "exhaustive_posterior",
    "frets_dataset",
    "gaussian_dataset",
    "identity",
    "log_det_invariant",
    "log_gamma_cone",
    "log_gamma_invariant",
    "log_laplace_integral",
    "log_pdf",
    "log_pdf_inverse",
    "log_phi_gamma",
    "log_post_unnorm",
    "log_prior_normalizer",
    "membership",
    "mh_cyclic",
    "mh_sym",
    "mle",
    "numeric_decompose",
    "orthonormal_basis",
    "parse_cycles",
    "project",
    "proposal_distribution",
    "sample_scatter",
    "totient",
    "transpositions",
]
