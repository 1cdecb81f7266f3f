# backend/montecarlo/__init__.py
from .simulator import (
    McConfig,
    McEstimate,
    mc_all,
    mc_sop_exact,
    mc_sop_lower,
    mc_pnz,
    mc_cdf_gamma_eq,
)
