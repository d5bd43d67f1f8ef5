"""Mittag-Leffler analysis engine.

Thin python layer over the C++ core: special functions (E_beta, E_{beta,gamma},
M-Wright), the Appell biorthogonal system, S/T transforms, operator symbols,
and the seeded grey-noise Monte Carlo sampler.
"""

from ._core import (  # noqa: F401
    AppellSystem,
    MLParams,
    MlcalcError,
    NonConvergentError,
    OutsideDomainError,
    __version__,
    appell_coeffs,
    apply_operator_json,
    exp_pairing,
    exp_vector_json,
    gamma_reciprocal,
    laplace_identity_residual,
    m_wright,
    mc_char_function,
    mehler_exp,
    mehler_semigroup_defect,
    mittag_leffler,
    mittag_leffler_general,
    ml_derivative,
    s_transform,
    sample_measure_flat,
    sample_subordinator,
    symbol,
    t_transform,
)
