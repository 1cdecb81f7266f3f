# backend/optimizer/__init__.py
from .power import (
    PowerTarget,
    metric_at,
    asymptote_at,
    min_power_for_target,
    saturation_floor,
    saturation_report,
)
