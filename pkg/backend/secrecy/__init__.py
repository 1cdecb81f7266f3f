# backend/secrecy/__init__.py
from .metrics import (
    SecrecyConfig,
    EveParams,
    instantaneous_secrecy_capacity,
    sop_lower_bound,
    sop_lower_bound_result,
    pnz_exact,
    pnz_exact_result,
    sop_asymptotic_high_main,
    sop_asymptotic_high_main_result,
    sop_asymptotic_high_eve,
    sop_asymptotic_high_eve_result,
    pnz_asymptotic_high_main,
    pnz_asymptotic_high_main_result,
    pnz_asymptotic_high_eve,
    pnz_asymptotic_high_eve_result,
    sop_rayleigh_special,
)
