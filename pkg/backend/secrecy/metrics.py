# backend/secrecy/metrics.py
import math

import numpy as np

from .. import config, logger
from ..errors import ConvergenceError, DomainError
from ..channels import AlphaMuParams
from ..mellin import (
    Evaluation,
    FoxHSpec,
    BivariateFoxHSpec,
    integrate_fox_h,
    clamp_probability,
    clip_probability,
    exp_integral_Ei,
    scaled_exp_integral_En,
)
from ..relay import (
    MetricResult,
    resolve_constant,
    weighted_bivariate_sum,
    cdf_s_kernel,
    rf_t_kernel,
)
from ..relay.end_to_end import BETA_JOINT


class SecrecyConfig:
    """
    Target secrecy rate R_s and threshold Theta = base^{R_s}.

    threshold_base "natural" (Theta = e^{R_s}) or "binary" (Theta = 2^{R_s}).
    """

    BASES = ("natural", "binary")

    def __init__(self, rate_rs=0.0, threshold_base="natural"):
        self.rate_rs = float(rate_rs)
        if not (math.isfinite(self.rate_rs) and self.rate_rs >= 0.0):
            raise DomainError(f"target secrecy rate must be non-negative, got {rate_rs}")
        if threshold_base not in self.BASES:
            raise DomainError(f"threshold_base must be one of {self.BASES}, got '{threshold_base}'")
        self.threshold_base = threshold_base
        base = math.e if threshold_base == "natural" else 2.0
        self.theta = base ** self.rate_rs

    def with_rate(self, rate_rs):
        return SecrecyConfig(rate_rs, self.threshold_base)

    def to_dict(self):
        return {"rate_rs": self.rate_rs, "threshold_base": self.threshold_base}

    def __repr__(self):
        return f"Secrecy(R_s={self.rate_rs:g}, Theta={self.theta:.6g})"


class EveParams(AlphaMuParams):
    """alpha-mu statistics of the S->E eavesdropper link (kappa_e, Lam_e as derived constants)."""

    @classmethod
    def of(cls, rf):
        return cls(rf.alpha, rf.mu, rf.mean_snr)

    def with_mean_snr(self, mean_snr):
        return EveParams(self.alpha, self.mu, mean_snr)


def instantaneous_secrecy_capacity(gamma_eq, gamma_e, base="natural"):
    """max(0, log(1 + gamma_eq) - log(1 + gamma_e)), in nats or bits."""
    g = np.asarray(gamma_eq, dtype=float)
    e = np.asarray(gamma_e, dtype=float)
    cap = np.maximum(0.0, np.log1p(g) - np.log1p(e))
    if base == "binary":
        cap = cap / math.log(2.0)
    elif base != "natural":
        raise DomainError(f"unknown logarithm base '{base}'")
    return float(cap) if cap.ndim == 0 else cap


def _secrecy_specs(links, eve):
    k2 = rf_t_kernel(links.rf, 1.0, eve)
    return [(t.weight, t.theta, BivariateFoxHSpec(BETA_JOINT, cdf_s_kernel(t), k2))
            for t in links.uwoc.mellin_terms()]


def _outage_sum(links, eve, relay, theta):
    # Theta kappa kappa_e / Lam_e^2 sum_k w_k H_k(C/theta_k, Lam_e/(Theta Lam)) = Pr[gamma_eq > Theta gamma_e]
    rf = links.rf
    C = resolve_constant(links, relay)
    prefactor = theta * rf.kappa * eve.kappa / eve.lam ** 2
    return weighted_bivariate_sum(_secrecy_specs(links, eve), C, eve.lam / (theta * rf.lam), prefactor)


def sop_lower_bound_result(links, eve, relay, sc):
    """SOP_L = Pr[gamma_eq <= Theta gamma_e]."""
    tail, evals = _outage_sum(links, eve, relay, sc.theta)
    err = sum(ev.error for _, ev in evals)
    value = clamp_probability(1.0 - tail, err, config.BIVARIATE_REL_TOL, what="SOP lower bound")
    logger.debug(f"[Secrecy] SOP_L = {value:.8g} ({links.rf}, eve {eve}, {sc})")
    return MetricResult(value, evals)


def sop_lower_bound(links, eve, relay, sc):
    return sop_lower_bound_result(links, eve, relay, sc).value


def pnz_exact_result(links, eve, relay):
    """PNZ = Pr[gamma_eq > gamma_e]; the Theta = 1 complement of SOP_L."""
    value, evals = _outage_sum(links, eve, relay, 1.0)
    err = sum(ev.error for _, ev in evals)
    return MetricResult(clamp_probability(value, err, config.BIVARIATE_REL_TOL, what="PNZ"), evals)


def pnz_exact(links, eve, relay):
    return pnz_exact_result(links, eve, relay).value


def _univariate_sum(items, prefactor):
    total = 0.0
    evals = []
    for k, (label, weight, spec, z) in enumerate(items):
        try:
            ev = integrate_fox_h(spec, z)
        except ConvergenceError as e:
            raise e.with_term(k)
        share = prefactor * weight
        total += share * ev.value
        evals.append((label, Evaluation(share * ev.value, abs(share) * ev.error, ev.nodes, half_line=ev.half_line)))
    return total, evals


def _high_main_items(links, eve, C, theta):
    """
    Leading residue of the Beta block for a strong main link: the second contour collapses
    onto t = -1 - s, leaving H^{1,3}_{3,2} (generalized Gamma) and H^{1,2}_{2,1} (exponential).
    """
    rf, p = links.rf, links.uwoc
    scale = eve.lam / (C * theta * rf.lam)
    items = []
    for t in p.mellin_terms():
        if t.kind == "gg":
            spec = FoxHSpec(1, 3, [(1.0, 1.0), (1.0 - p.a, p.rho), (1.0 - rf.mu, rf.nu)],
                            [(eve.mu, eve.nu), (0.0, 1.0)])
        else:
            spec = FoxHSpec(1, 2, [(1.0, float(p.r)), (1.0 - rf.mu, rf.nu)], [(eve.mu, eve.nu)])
        items.append((t.kind, t.weight, spec, t.theta * scale))
    return items


def _sop_high_main(links, eve, relay, theta):
    rf = links.rf
    C = resolve_constant(links, relay)
    prefactor = rf.kappa * eve.kappa / (rf.lam * eve.lam)
    return _univariate_sum(_high_main_items(links, eve, C, theta), prefactor)


def sop_asymptotic_high_main_result(links, eve, relay, sc):
    total, evals = _sop_high_main(links, eve, relay, sc.theta)
    return MetricResult(clip_probability(1.0 - total), evals)


def sop_asymptotic_high_main(links, eve, relay, sc):
    """SOP as the main-link average SNR grows large."""
    return sop_asymptotic_high_main_result(links, eve, relay, sc).value


def _high_eve_items(links, eve, C):
    """
    Leading residue for a strong eavesdropper: the pole t = -1 - mu_e/nu_e of Gamma(mu_e + nu_e + nu_e t).
    """
    p = links.uwoc
    q = eve.mu / eve.nu
    items = []
    for t in p.mellin_terms():
        if t.kind == "gg":
            spec = FoxHSpec(1, 2, [(1.0, 1.0), (1.0 - p.a, p.rho)], [(q, 1.0)])
        else:
            spec = FoxHSpec(1, 2, [(0.0, 1.0), (1.0, float(p.r))], [(q, 1.0)])
        items.append((t.kind, t.weight, spec, t.theta / C))
    return items


def _sop_high_eve(links, eve, relay, theta):
    rf = links.rf
    C = resolve_constant(links, relay)
    q = eve.mu / eve.nu
    log_pref = (
        math.log(0.5 * eve.alpha) + math.lgamma(rf.mu + rf.nu * q)
        - math.lgamma(rf.mu) - math.lgamma(eve.mu) - math.lgamma(1.0 + q)
        + q * math.log(eve.lam / (theta * rf.lam))
    )
    return _univariate_sum(_high_eve_items(links, eve, C), math.exp(log_pref))


def sop_asymptotic_high_eve_result(links, eve, relay, sc):
    total, evals = _sop_high_eve(links, eve, relay, sc.theta)
    return MetricResult(clip_probability(1.0 - total), evals)


def sop_asymptotic_high_eve(links, eve, relay, sc):
    """SOP as the eavesdropper average SNR grows large."""
    return sop_asymptotic_high_eve_result(links, eve, relay, sc).value


def pnz_asymptotic_high_main_result(links, eve, relay):
    total, evals = _sop_high_main(links, eve, relay, 1.0)
    return MetricResult(clip_probability(total), evals)


def pnz_asymptotic_high_main(links, eve, relay):
    return pnz_asymptotic_high_main_result(links, eve, relay).value


def pnz_asymptotic_high_eve_result(links, eve, relay):
    total, evals = _sop_high_eve(links, eve, relay, 1.0)
    return MetricResult(clip_probability(total), evals)


def pnz_asymptotic_high_eve(links, eve, relay):
    return pnz_asymptotic_high_eve_result(links, eve, relay).value


def _is(x, target):
    return abs(x - target) <= 1e-12


def sop_rayleigh_special(links, eve, relay, sc):
    """
    Elementary form of the strong-main-link SOP for Rayleigh RF legs (alpha = 2, mu = 1 on both)
    and a heterodyne exponential-Gamma optical leg (c = 1, r = 1):

        SOP = (1 - omega)(1 - a e^{x_b} E_{a+1}(x_b)) - omega x_l e^{x_l} Ei(-x_l)

    with x_b = C Theta Lam / (b Lam_e mu_r), x_l = C Theta Lam / (lambda Lam_e mu_r).
    """
    rf, p = links.rf, links.uwoc
    checks = [
        ("alpha", rf.alpha, 2.0), ("alpha_e", eve.alpha, 2.0), ("mu", rf.mu, 1.0), ("mu_e", eve.mu, 1.0),
        ("c", p.c, 1.0), ("r", p.r, 1.0),
    ]
    bad = [f"{name}={v:g} (needs {want:g})" for name, v, want in checks if not _is(v, want)]
    if bad:
        raise DomainError("Rayleigh special case does not apply: " + ", ".join(bad))
    C = resolve_constant(links, relay)
    base = C * sc.theta * rf.lam / (eve.lam * p.mu_r)
    value = 0.0
    if p.omega < 1.0:
        x_b = base / p.b
        value += (1.0 - p.omega) * (1.0 - p.a * scaled_exp_integral_En(p.a + 1.0, x_b))
    if p.omega > 0.0:
        x_l = base / p.lam
        if x_l < 600.0:
            value -= p.omega * x_l * math.exp(x_l) * exp_integral_Ei(-x_l)
        else:
            # e^x Ei(-x) = -e^x E_1(x)
            value += p.omega * x_l * scaled_exp_integral_En(1, x_l)
    return clip_probability(value)
