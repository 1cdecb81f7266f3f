# backend/config.py
import os

# Contour quadrature
REL_TOL = 1e-9              # univariate H-function target (relative to integrand L1 norm)
BIVARIATE_REL_TOL = 1e-7    # nested double contour target
MAX_NODES = 200_000         # node budget per axis
GL_ORDER = 16               # Gauss-Legendre nodes per panel
INITIAL_HALF_HEIGHT = 8.0   # first truncation height T tried on Im(s)
MAX_HALF_HEIGHT = 8192.0    # T is doubled up to this value
TAIL_FACTOR = 1e-2          # endpoint magnitude must fall below TAIL_FACTOR * rel_tol * peak
POLE_MARGIN = 0.05          # minimum distance kept between a contour and the nearest pole
BIVARIATE_ROW_CHUNK = 64    # outer nodes integrated together on the inner axis

# Probability clamping
CLAMP_FACTOR = 10.0         # clamp excursions up to CLAMP_FACTOR * max(rel_tol, error estimate)

# Monte Carlo
DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 20220617
DEFAULT_STREAMS = 8
MIN_REPORTED_TRIALS = 1_000
MC_CHUNK = 250_000           # draws per batch inside a stream; part of the reproducibility contract

# Optimizer (main-link average SNR in dB)
SEARCH_LO_DB = 0.0
SEARCH_HI_DB = 50.0
TOL_DB = 0.05
SATURATION_BAND = 0.05      # onset = first SNR where the metric is within 5% of the floor
BRACKET_POINTS = 21

# Worker pool
MAX_WORKERS = 8

# CSV output
CSV_SCHEMA_VERSION = "aquaguard-csv/1"

# Exit codes
EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_INFEASIBLE = 3

# Logging
VERBOSE = False

# Paths
BASE_DIR = os.path.dirname(os.path.dirname(__file__))
REPORTS_DIR = os.path.join(BASE_DIR, "reports")
REPORT_FILE = os.path.join(REPORTS_DIR, "selftest_report.txt")
LOG_FILE = os.path.join(REPORTS_DIR, "aquaguard.log")
PRESETS_FILE = os.path.join(BASE_DIR, "presets", "egg_presets.json")
SCENARIOS_DIR = os.path.join(BASE_DIR, "scenarios")
