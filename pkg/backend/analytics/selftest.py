# backend/analytics/selftest.py
import datetime
import math
import time

import numpy as np

from .. import config, logger
from ..errors import AquaGuardError
from ..mellin import FoxHSpec, choose_contour, eval_fox_h
from ..channels import (
    AlphaMuParams,
    EggParams,
    alpha_mu_cdf,
    alpha_mu_cdf_closed,
    egg_ccdf,
    egg_ccdf_closed,
)
from ..relay import RelayConfig, LinkPair
from ..secrecy import (
    SecrecyConfig,
    EveParams,
    sop_lower_bound,
    pnz_exact,
    sop_asymptotic_high_main,
    sop_rayleigh_special,
)
from ..montecarlo import McConfig, mc_all
from ..monitors.resource_monitor import ResourceMonitor

ALPHA_MU_SETS = ((2.0, 1.0), (1.6, 1.5), (2.1, 1.4), (1.5, 0.8))
SMOKE_EGG = EggParams(0.2130, 0.3291, 1.4299, 1.1817, 17.1984, r=1, mu_r=10.0)


class Check:
    def __init__(self, name, passed, detail):
        self.name = name
        self.passed = passed
        self.detail = detail


def _h_reduction_exp(rel_tol):
    spec = FoxHSpec(1, 0, [], [(0.0, 1.0)])
    worst = 0.0
    for z in np.geomspace(1e-3, 30.0, 20):
        v = eval_fox_h(spec, z, choose_contour(spec, z, rel_tol=rel_tol))
        worst = max(worst, abs(v - math.exp(-z)))
    return worst <= 1e-10, f"max |H - e^-z| = {worst:.2e}"


def _h_reduction_power(rel_tol):
    worst = 0.0
    for b in (0.5, 1.0, 2.7):
        spec = FoxHSpec(1, 0, [], [(b, 1.0)])
        for z in (0.1, 1.0, 10.0):
            v = eval_fox_h(spec, z, choose_contour(spec, z, rel_tol=rel_tol))
            ref = z ** b * math.exp(-z)
            worst = max(worst, abs(v - ref) / ref)
    return worst <= 1e-9, f"max relative error vs z^b e^-z = {worst:.2e}"


def _alpha_mu_consistency(rel_tol):
    worst = 0.0
    for alpha, mu in ALPHA_MU_SETS:
        for mean in (1.0, 10.0):
            p = AlphaMuParams(alpha, mu, mean)
            for g in np.geomspace(0.01 * mean, 10.0 * mean, 6):
                worst = max(worst, abs(alpha_mu_cdf(p, g) - float(alpha_mu_cdf_closed(p, g))))
    return worst <= 1e-8, f"max |CDF_H - P(mu, .)| = {worst:.2e}"


def _egg_consistency(rel_tol):
    worst = 0.0
    for r in (1, 2):
        s = SMOKE_EGG
        p = EggParams(s.omega, s.lam, s.a, s.b, s.c, r, 1.0)
        for g in np.geomspace(1e-3, 10.0, 6):
            worst = max(worst, abs(egg_ccdf(p, g) - float(egg_ccdf_closed(p, g))))
    return worst <= 1e-6, f"max |CCDF_H - closed form| = {worst:.2e}"


def _rayleigh_reduction(rel_tol):
    links = LinkPair(AlphaMuParams.rayleigh(100.0), EggParams.exponential_gamma(0.3, 1.2, 2.0, 0.8, 1, 10.0))
    eve = EveParams.rayleigh(10.0)
    relay = RelayConfig.explicit(1.0)
    sc = SecrecyConfig(0.1)
    a = sop_asymptotic_high_main(links, eve, relay, sc)
    b = sop_rayleigh_special(links, eve, relay, sc)
    return abs(a - b) <= 1e-8, f"|SOP_a - elementary form| = {abs(a - b):.2e}"


def _smoke_links():
    links = LinkPair(AlphaMuParams.from_db(1.6, 1.5, 10.0), SMOKE_EGG)
    return links, EveParams.from_db(1.6, 1.5, 5.0), RelayConfig.explicit(1.0)


def _theta_one_identity(rel_tol):
    links, eve, relay = _smoke_links()
    total = sop_lower_bound(links, eve, relay, SecrecyConfig(0.0)) + pnz_exact(links, eve, relay)
    return abs(total - 1.0) <= 1e-6, f"SOP_L + PNZ = {total:.10f} at Theta = 1"


def _mc_agreement(rel_tol):
    links, eve, relay = _smoke_links()
    sc = SecrecyConfig(0.1)
    analytic = sop_lower_bound(links, eve, relay, sc)
    est = mc_all(links, eve, relay, sc, McConfig(200_000, config.DEFAULT_SEED, 4))["sop_lower"]
    gap = abs(analytic - est.value)
    band = 3.0 * est.std_error + 1e-6
    return gap <= band, f"SOP_L = {analytic:.5f}, MC = {est.value:.5f} +/- {est.std_error:.1e}"


CHECKS = (
    ("H reduction e^-z", _h_reduction_exp),
    ("H reduction z^b e^-z", _h_reduction_power),
    ("alpha-mu CDF vs incomplete gamma", _alpha_mu_consistency),
    ("EGG CCDF vs closed form", _egg_consistency),
    ("Rayleigh elementary form vs asymptote", _rayleigh_reduction),
    ("Theta=1 identity SOP_L + PNZ = 1", _theta_one_identity),
    ("SOP_L vs Monte Carlo smoke point", _mc_agreement),
)


def run_selftest(rel_tol=None):
    """
    Runs the invariant suite; rel_tol overrides the H-function tolerance of the reduction checks.

    returns:
        {
            "passed": bool,
            "checks": [Check],
            "elapsed_s": float,
            "peak_rss_mb": float
        }
    """
    rel_tol = config.REL_TOL if rel_tol is None else rel_tol
    monitor = ResourceMonitor()
    checks = []
    for name, fn in CHECKS:
        t0 = time.time()
        try:
            ok, detail = fn(rel_tol)
        except AquaGuardError as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        checks.append(Check(name, ok, f"{detail} ({time.time() - t0:.1f} s)"))
        logger.log(f"[SelfTest] {'PASS' if ok else 'FAIL'} {name}: {detail}")

    usage = monitor.summary()
    passed = all(c.passed for c in checks)
    lines = [f"AquaGuard self-test {datetime.datetime.now().strftime('%Y-%m-%d %H:%M:%S')} (rel_tol={rel_tol:g})"]
    for c in checks:
        lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    lines.append(f"  result: {'PASS' if passed else 'FAIL'}, {usage['elapsed_s']:.1f} s, "
                 f"peak RSS {usage['peak_rss_mb']:.0f} MB")
    try:
        logger.append_report("\n".join(lines))
    except OSError as e:
        logger.log(f"[SelfTest] could not write report: {e}")
    return {"passed": passed, "checks": checks, "elapsed_s": usage["elapsed_s"], "peak_rss_mb": usage["peak_rss_mb"]}
