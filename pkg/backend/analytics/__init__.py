# backend/analytics/__init__.py
from .scenario import Scenario, SweepAxis, SWEEP_VARIABLES, set_path
from .evaluation import (
    METRIC_COLUMNS,
    MC_COLUMNS,
    run_eval,
    run_sweep,
    sweep_points,
    sweep_csv,
    read_sweep_csv,
)
from .selftest import run_selftest, CHECKS
