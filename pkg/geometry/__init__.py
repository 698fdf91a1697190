"""Geometry module - kernels, states, curvature and the independent oracle."""

from geometry.curvature import (
    basis,
    decompose,
    grouped_term,
    kubo_mori,
    link_breakdown,
    metric_gram,
    scal,
    scal_naive,
    scal_pair,
    scal_real,
    subterm,
    v_sum,
)
from geometry.kernels import (
    DEFAULT_POLICY,
    HARNESS_POLICY,
    kappa_fn,
    m2,
    m3,
    m4,
    m_k,
    phi,
    phi1,
    phi2,
    rho_fn,
    v_fn,
)
from geometry.oracle import (
    default_chart,
    divided_difference_quad,
    intrinsic_scal,
    metric_fd,
    recombine_chart,
    scal_fd,
)
from geometry.states import (
    density_matrix,
    diagonal_state,
    doubly_stochastic,
    entropy_profile,
    gibbs,
    gibbs_chain,
    majorizes,
    pair_chain,
    random_density_matrix,
    random_tangent,
    random_unitary,
    relative_entropy,
    replay,
    sample_spectrum,
    spectral_decomposition,
    t_transform,
    t_transform_decompose,
    von_neumann_entropy,
)
from utils.errors import (
    BoundaryError,
    DomainError,
    KMLabError,
    NumericalError,
    OrderingError,
    UsageError,
)

__all__ = [
    "DEFAULT_POLICY",
    "HARNESS_POLICY",
    "m_k",
    "m2",
    "m3",
    "m4",
    "phi",
    "v_fn",
    "phi1",
    "phi2",
    "kappa_fn",
    "rho_fn",
    "density_matrix",
    "diagonal_state",
    "random_unitary",
    "random_density_matrix",
    "random_tangent",
    "sample_spectrum",
    "spectral_decomposition",
    "majorizes",
    "t_transform",
    "t_transform_decompose",
    "replay",
    "pair_chain",
    "doubly_stochastic",
    "gibbs",
    "gibbs_chain",
    "von_neumann_entropy",
    "entropy_profile",
    "relative_entropy",
    "basis",
    "kubo_mori",
    "metric_gram",
    "scal",
    "scal_real",
    "scal_pair",
    "scal_naive",
    "v_sum",
    "decompose",
    "link_breakdown",
    "subterm",
    "grouped_term",
    "divided_difference_quad",
    "metric_fd",
    "scal_fd",
    "intrinsic_scal",
    "default_chart",
    "recombine_chart",
    "KMLabError",
    "DomainError",
    "BoundaryError",
    "UsageError",
    "OrderingError",
    "NumericalError",
]
