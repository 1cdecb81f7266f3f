# backend/optimizer/power.py
import numpy as np

from .. import config, logger
from ..errors import DomainError, InfeasibleError
from ..channels import db_to_linear
from ..secrecy import (
    sop_lower_bound,
    pnz_exact,
    sop_asymptotic_high_main,
    pnz_asymptotic_high_main,
)

METRICS = ("sop", "pnz")


class PowerTarget:
    """
    Reach SOP <= target (metric "sop") or PNZ >= target (metric "pnz") with the smallest
    main-link average SNR in [search_lo, search_hi] dB, resolved to tol_db.
    """

    def __init__(self, metric, target, search_lo=None, search_hi=None, tol_db=None):
        if metric not in METRICS:
            raise DomainError(f"target metric must be one of {METRICS}, got '{metric}'")
        self.metric = metric
        self.target = float(target)
        self.search_lo = config.SEARCH_LO_DB if search_lo is None else float(search_lo)
        self.search_hi = config.SEARCH_HI_DB if search_hi is None else float(search_hi)
        self.tol_db = config.TOL_DB if tol_db is None else float(tol_db)
        if not 0.0 < self.target < 1.0:
            raise DomainError(f"target must lie in (0, 1), got {target}")
        if not self.search_lo < self.search_hi:
            raise DomainError(f"search range [{self.search_lo}, {self.search_hi}] dB is empty")
        if not self.tol_db > 0.0:
            raise DomainError(f"tol_db must be positive, got {tol_db}")

    def met(self, value):
        return value <= self.target if self.metric == "sop" else value >= self.target

    def __repr__(self):
        sign = "<=" if self.metric == "sop" else ">="
        return f"PowerTarget({self.metric} {sign} {self.target:g} in [{self.search_lo:g}, {self.search_hi:g}] dB)"


def _at(links, snr_db):
    return links.with_rf(links.rf.with_mean_snr(db_to_linear(snr_db)))


def metric_at(links, eve, relay, sc, metric, snr_db):
    """Exact (PNZ) or lower-bound (SOP) metric at a main-link average SNR in dB."""
    moved = _at(links, snr_db)
    if metric == "sop":
        return sop_lower_bound(moved, eve, relay, sc)
    return pnz_exact(moved, eve, relay)


def asymptote_at(links, eve, relay, sc, metric, snr_db):
    moved = _at(links, snr_db)
    if metric == "sop":
        return sop_asymptotic_high_main(moved, eve, relay, sc)
    return pnz_asymptotic_high_main(moved, eve, relay)


def _asymptotic_guess(links, eve, relay, sc, t):
    grid = np.linspace(t.search_lo, t.search_hi, config.BRACKET_POINTS)
    for x in grid:
        if t.met(asymptote_at(links, eve, relay, sc, t.metric, x)):
            return float(x)
    return t.search_hi


def min_power_for_target(links, eve, relay, sc, t):
    """
    Smallest main-link average SNR (dB) meeting the target under the exact / lower-bound
    expression. The high-SNR asymptote places the first trial point; exact evaluations then
    bracket and bisect.

    raises InfeasibleError when the target is not met at search_hi (saturation floor)
    """
    exact = {}

    def ok(x):
        if x not in exact:
            exact[x] = metric_at(links, eve, relay, sc, t.metric, x)
        return t.met(exact[x])

    if not ok(t.search_hi):
        raise InfeasibleError(
            f"{t.metric} target {t.target:g} not reachable: {t.metric} at {t.search_hi:g} dB is "
            f"{exact[t.search_hi]:.6g} (saturation floor)"
        )
    if ok(t.search_lo):
        return t.search_lo

    step = (t.search_hi - t.search_lo) / (config.BRACKET_POINTS - 1)
    guess = _asymptotic_guess(links, eve, relay, sc, t)
    if ok(guess):
        hi = guess
        lo = max(t.search_lo, guess - step)
        while ok(lo) and lo > t.search_lo:
            hi, lo = lo, max(t.search_lo, lo - step)
    else:
        lo = guess
        hi = min(t.search_hi, guess + step)
        while not ok(hi):
            lo, hi = hi, min(t.search_hi, hi + step)

    while hi - lo > t.tol_db:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    logger.log(f"[Optimizer] {t}: {hi:.3f} dB after {len(exact)} exact evaluations (asymptote guess {guess:.2f} dB)")
    return hi


def saturation_floor(links, eve, relay, sc, metric, search_hi=None):
    """Metric at the top of the search range, the floor it saturates at as the main link improves."""
    hi = config.SEARCH_HI_DB if search_hi is None else float(search_hi)
    return metric_at(links, eve, relay, sc, metric, hi)


def saturation_report(links, eve, relay, sc, metric, search_lo=None, search_hi=None, tol_db=None):
    """
    returns:
        {
            "floor": metric at search_hi,
            "asymptotic": high-SNR asymptote at search_hi,
            "onset_db": first SNR where the metric is within SATURATION_BAND of the floor,
            "search_hi_db": float
        }
    """
    lo = config.SEARCH_LO_DB if search_lo is None else float(search_lo)
    hi = config.SEARCH_HI_DB if search_hi is None else float(search_hi)
    tol = config.TOL_DB if tol_db is None else float(tol_db)
    floor = saturation_floor(links, eve, relay, sc, metric, hi)
    asym = asymptote_at(links, eve, relay, sc, metric, hi)

    def near(x):
        v = metric_at(links, eve, relay, sc, metric, x)
        return abs(v - floor) <= config.SATURATION_BAND * max(abs(floor), 1e-300)

    if near(lo):
        onset = lo
    else:
        a, b = lo, hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if near(mid):
                b = mid
            else:
                a = mid
        onset = b
    return {"floor": floor, "asymptotic": asym, "onset_db": onset, "search_hi_db": hi}
