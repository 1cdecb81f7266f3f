# backend/channels/__init__.py
from .alpha_mu import (
    AlphaMuParams,
    db_to_linear,
    linear_to_db,
    alpha_mu_pdf,
    alpha_mu_pdf_h,
    alpha_mu_cdf,
    alpha_mu_cdf_closed,
    alpha_mu_sample,
)
from .egg import (
    EggParams,
    UwocTerm,
    egg_pdf,
    egg_pdf_h,
    egg_ccdf,
    egg_ccdf_closed,
    egg_sample,
    egg_from_db,
)
from .presets import ChannelPreset, PresetRegistry
