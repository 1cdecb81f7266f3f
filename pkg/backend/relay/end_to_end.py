# backend/relay/end_to_end.py
import math

import numpy as np

from .. import config, logger
from ..errors import ConvergenceError, DomainError
from ..mellin import (
    Evaluation,
    FoxHSpec,
    BivariateFoxHSpec,
    integrate_fox_h,
    integrate_bivariate_fox_h,
    clamp_probability,
)
from ..channels import alpha_mu_sample

# Gamma(-1 - s - t): the Beta integral over the relay noise split, common to every bivariate form
BETA_JOINT = [(2.0, 1.0, 1.0)]


class RelayConfig:
    """
    Fixed-gain amplify-and-forward relay.

    mode "explicit_C": the constant C of gamma_eq = gamma1 gamma2 / (gamma2 + C) is given.
    mode "from_powers": C = 1/(G^2 N0) with G^2 = (P2/N1) E[1/(1 + gamma1)], the gain a
    relay with statistical CSI of the first hop applies. P1 enters through the main-link
    average SNR only (gamma1 = P1 |h1|^2 / N1).
    """

    MODES = ("explicit_C", "from_powers")

    def __init__(self, mode="explicit_C", C=None, P1=None, P2=None, N0=None, N1=None):
        if mode not in self.MODES:
            raise DomainError(f"relay mode must be one of {self.MODES}, got '{mode}'")
        self.mode = mode
        self.C = C
        self.P1, self.P2, self.N0, self.N1 = P1, P2, N0, N1
        if mode == "explicit_C":
            if C is None or not (math.isfinite(C) and C > 0.0):
                raise DomainError(f"fixed-gain constant C must be positive, got {C}")
            self.C = float(C)
        else:
            for name in ("P2", "N0", "N1"):
                v = getattr(self, name)
                if v is None or not (math.isfinite(v) and v > 0.0):
                    raise DomainError(f"relay power {name} must be positive, got {v}")
            if P1 is not None and not P1 > 0.0:
                raise DomainError(f"relay power P1 must be positive, got {P1}")

    @classmethod
    def explicit(cls, C):
        return cls("explicit_C", C=C)

    @classmethod
    def from_powers(cls, P2=1.0, N0=1.0, N1=1.0, P1=None):
        return cls("from_powers", P1=P1, P2=P2, N0=N0, N1=N1)

    def with_P2(self, P2):
        return RelayConfig("from_powers", P1=self.P1, P2=P2, N0=self.N0, N1=self.N1)

    def to_dict(self):
        if self.mode == "explicit_C":
            return {"mode": self.mode, "C": self.C}
        return {"mode": self.mode, "P1": self.P1, "P2": self.P2, "N0": self.N0, "N1": self.N1}

    def __repr__(self):
        if self.mode == "explicit_C":
            return f"Relay(C={self.C:g})"
        return f"Relay(P2={self.P2:g}, N0={self.N0:g}, N1={self.N1:g})"


class LinkPair:
    """S->R alpha-mu RF leg and R->D EGG optical leg."""

    def __init__(self, rf, uwoc):
        self.rf = rf
        self.uwoc = uwoc

    def with_rf(self, rf):
        return LinkPair(rf, self.uwoc)

    def with_uwoc(self, uwoc):
        return LinkPair(self.rf, uwoc)

    def __repr__(self):
        return f"LinkPair({self.rf}, {self.uwoc})"


class MetricResult:
    """
    A metric value plus the contour evaluations it was assembled from.

    evaluations: list of (term label, Evaluation)
    """

    def __init__(self, value, evaluations=()):
        self.value = value
        self.evaluations = list(evaluations)

    @property
    def nodes(self):
        return sum(ev.nodes for _, ev in self.evaluations)

    @property
    def error(self):
        return sum(abs(ev.error) for _, ev in self.evaluations)

    def __repr__(self):
        return f"MetricResult({self.value:.10g}, terms={len(self.evaluations)}, nodes={self.nodes})"


def gamma_eq(gamma1, gamma2, C, links=None):
    """
    gamma1 gamma2 / (gamma2 + C).

    C is a number or a RelayConfig; a from_powers relay is resolved against links.rf.
    """
    if isinstance(C, RelayConfig):
        if C.mode == "explicit_C":
            C = C.C
        elif links is None:
            raise DomainError("gamma_eq with a from_powers relay needs the links to resolve C")
        else:
            C = resolve_constant(links, C)
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    if np.any(g1 < 0.0) or np.any(g2 < 0.0):
        raise DomainError("SNRs must be non-negative")
    with np.errstate(divide="ignore"):
        out = g1 / (1.0 + C / g2)
    return float(out) if out.ndim == 0 else out


def _inverse_snr_spec(rf):
    # E[1/(1+gamma1)] = kappa H^{2,1}_{1,2}[Lam | (0,1); (0,1), (mu-nu, nu)]
    return FoxHSpec(2, 1, [(0.0, 1.0)], [(0.0, 1.0), (rf.mu - rf.nu, rf.nu)])


def expected_inverse_snr(rf):
    """E[1/(1 + gamma1)] through the H^{2,1}_{1,2} form."""
    ev = integrate_fox_h(_inverse_snr_spec(rf), rf.lam)
    return rf.kappa * ev.value


def fixed_gain_constant(rf, relay):
    if relay.mode == "explicit_C":
        return relay.C
    g2 = relay.P2 / relay.N1 * expected_inverse_snr(rf)
    return 1.0 / (g2 * relay.N0)


def fixed_gain_constant_mc(rf, relay, rng, trials=None):
    """
    Monte Carlo estimate of C from draws of gamma1 (gamma1 = P1 |h1|^2 / N1).

    returns (C estimate, standard error by the delta method)
    """
    if relay.mode == "explicit_C":
        return relay.C, 0.0
    trials = config.DEFAULT_TRIALS if trials is None else int(trials)
    inv = 1.0 / (1.0 + alpha_mu_sample(rf, rng, size=trials))
    m = float(inv.mean())
    s = float(inv.std(ddof=1))
    k = relay.N1 / (relay.P2 * relay.N0)
    return k / m, k * s / (m * m * math.sqrt(trials))


def resolve_constant(links, relay):
    C = fixed_gain_constant(links.rf, relay)
    if not (math.isfinite(C) and C > 0.0):
        raise ConvergenceError(f"fixed-gain constant evaluated to {C}")
    return C


def cdf_s_kernel(term):
    """phi_k(s) Gamma(1 + s) of one EGG branch."""
    lower = list(term.left_gammas)
    if term.kind == "exp":
        lower.append((1.0, 1.0))
    return FoxHSpec(len(lower), 0, [], lower)


def rf_t_kernel(rf, denominator_shift, eve=None):
    # Gamma(mu - nu - nu t) [Gamma(mu_e + nu_e + nu_e t)] / Gamma(1 - b - t)
    lower = []
    m = 0
    if eve is not None:
        lower.append((eve.mu + eve.nu, eve.nu))
        m = 1
    lower.append((denominator_shift, 1.0))
    return FoxHSpec(m, 1, [(1.0 + rf.nu - rf.mu, rf.nu)], lower)


def cdf_specs(links):
    """(weight, theta, BivariateFoxHSpec) per EGG branch for the end-to-end CDF."""
    k2 = rf_t_kernel(links.rf, 1.0)
    return [(t.weight, t.theta, BivariateFoxHSpec(BETA_JOINT, cdf_s_kernel(t), k2))
            for t in links.uwoc.mellin_terms()]


def pdf_specs(links):
    k2 = rf_t_kernel(links.rf, 2.0)
    return [(t.weight, t.theta, BivariateFoxHSpec(BETA_JOINT, cdf_s_kernel(t), k2))
            for t in links.uwoc.mellin_terms()]


def weighted_bivariate_sum(specs, z1_numerator, z2, prefactor):
    """
    prefactor * sum_k w_k H_k(z1_numerator/theta_k, z2) over (w_k, theta_k, spec_k).

    returns (value, [(label, Evaluation scaled to its share of value)])
    """
    total = 0.0
    evals = []
    for k, (weight, theta, spec) in enumerate(specs):
        try:
            ev = integrate_bivariate_fox_h(spec, z1_numerator / theta, z2)
        except ConvergenceError as e:
            raise e.with_term(k)
        share = prefactor * weight
        total += share * ev.value
        scaled = Evaluation(share * ev.value, abs(share) * ev.error, ev.nodes, half_line=ev.half_line)
        evals.append((f"term{k}", scaled))
    return total, evals


def cdf_gamma_eq_result(links, relay, gamma):
    """
    F(gamma) = 1 - kappa gamma sum_k w_k H_k(C/theta_k, 1/(gamma Lam)).

    returns MetricResult
    """
    gamma = float(gamma)
    if not gamma > 0.0:
        raise DomainError(f"end-to-end CDF needs gamma > 0, got {gamma}")
    rf = links.rf
    C = resolve_constant(links, relay)
    tail, evals = weighted_bivariate_sum(cdf_specs(links), C, 1.0 / (gamma * rf.lam), rf.kappa * gamma)
    err = sum(ev.error for _, ev in evals)
    value = clamp_probability(1.0 - tail, err, config.BIVARIATE_REL_TOL, what="end-to-end CDF")
    logger.debug(f"[E2E] CDF({gamma:.4g}) = {value:.8g} with C={C:.4g}")
    return MetricResult(value, evals)


def cdf_gamma_eq(links, relay, gamma):
    return cdf_gamma_eq_result(links, relay, gamma).value


def pdf_gamma_eq_result(links, relay, gamma):
    """f(gamma) = kappa sum_k w_k H'_k(C/theta_k, 1/(gamma Lam))."""
    gamma = float(gamma)
    if not gamma > 0.0:
        raise DomainError(f"end-to-end PDF needs gamma > 0, got {gamma}")
    rf = links.rf
    C = resolve_constant(links, relay)
    value, evals = weighted_bivariate_sum(pdf_specs(links), C, 1.0 / (gamma * rf.lam), rf.kappa)
    err = sum(ev.error for _, ev in evals)
    if value < -config.CLAMP_FACTOR * max(err, config.BIVARIATE_REL_TOL * abs(value)):
        raise ConvergenceError(f"end-to-end PDF evaluated negative ({value:.4g})")
    return MetricResult(max(0.0, value), evals)


def pdf_gamma_eq(links, relay, gamma):
    return pdf_gamma_eq_result(links, relay, gamma).value
