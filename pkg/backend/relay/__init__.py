# backend/relay/__init__.py
from .end_to_end import (
    RelayConfig,
    LinkPair,
    MetricResult,
    gamma_eq,
    expected_inverse_snr,
    fixed_gain_constant,
    fixed_gain_constant_mc,
    resolve_constant,
    weighted_bivariate_sum,
    cdf_s_kernel,
    rf_t_kernel,
    cdf_specs,
    pdf_specs,
    cdf_gamma_eq,
    cdf_gamma_eq_result,
    pdf_gamma_eq,
    pdf_gamma_eq_result,
)
