# backend/channels/alpha_mu.py
import math

import numpy as np
from scipy import special

from ..errors import DomainError
from ..mellin import FoxHSpec, integrate_fox_h, clamp_probability


def db_to_linear(db):
    return 10.0 ** (float(db) / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


class AlphaMuParams:
    """
    alpha-mu fading of an RF leg, expressed on the instantaneous SNR gamma:

        f(gamma) = alpha mu^mu gamma^{alpha mu/2 - 1} / (2 mean^{alpha mu/2} Gamma(mu))
                   * exp(-mu (gamma/mean)^{alpha/2})

    Derived constants used by every H-function form:
        nu    = 2/alpha         (Mellin scale of the SNR law)
        beta  = mu^nu
        Lam   = beta / mean_snr
        kappa = beta / (Gamma(mu) mean_snr)
    """

    def __init__(self, alpha, mu, mean_snr):
        self.alpha = float(alpha)
        self.mu = float(mu)
        self.mean_snr = float(mean_snr)
        for name, v in (("alpha", self.alpha), ("mu", self.mu), ("mean_snr", self.mean_snr)):
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"alpha-mu parameter {name} must be positive, got {v}")
        self.nu = 2.0 / self.alpha
        self.beta = self.mu ** self.nu
        self.lam = self.beta / self.mean_snr
        self.kappa = math.exp(math.log(self.lam) - math.lgamma(self.mu))
        if not all(math.isfinite(v) and v > 0.0 for v in (self.beta, self.lam, self.kappa)):
            raise DomainError(f"alpha-mu constants overflow for {self}")

    @classmethod
    def from_db(cls, alpha, mu, mean_snr_db):
        return cls(alpha, mu, db_to_linear(mean_snr_db))

    @classmethod
    def rayleigh(cls, mean_snr):
        return cls(2.0, 1.0, mean_snr)

    @classmethod
    def nakagami(cls, m, mean_snr):
        return cls(2.0, m, mean_snr)

    @classmethod
    def weibull(cls, alpha, mean_snr):
        return cls(alpha, 1.0, mean_snr)

    def with_mean_snr(self, mean_snr):
        return AlphaMuParams(self.alpha, self.mu, mean_snr)

    @property
    def mean_snr_db(self):
        return linear_to_db(self.mean_snr)

    def to_dict(self):
        return {"alpha": self.alpha, "mu": self.mu, "mean_snr_db": self.mean_snr_db}

    def __repr__(self):
        return f"AlphaMu(alpha={self.alpha:g}, mu={self.mu:g}, mean={self.mean_snr_db:.2f} dB)"

    # H-function forms

    def pdf_spec(self):
        """f(gamma) = kappa H^{1,0}_{0,1}[Lam gamma | (mu - nu, nu)]"""
        return FoxHSpec(1, 0, [], [(self.mu - self.nu, self.nu)])

    def cdf_spec(self):
        """F(gamma) = (kappa/Lam) H^{1,1}_{1,2}[Lam gamma | (1,1); (mu,nu), (0,1)]"""
        return FoxHSpec(1, 1, [(1.0, 1.0)], [(self.mu, self.nu), (0.0, 1.0)])


def alpha_mu_pdf(p, gamma):
    gamma = float(gamma)
    if gamma < 0.0:
        raise DomainError(f"SNR must be non-negative, got {gamma}")
    power = 0.5 * p.alpha * p.mu
    if gamma == 0.0:
        if power > 1.0:
            return 0.0
        if power < 1.0:
            return math.inf
        return p.alpha * p.mu ** p.mu / (2.0 * p.mean_snr * math.gamma(p.mu))
    x = gamma / p.mean_snr
    log_f = (math.log(p.alpha) + p.mu * math.log(p.mu) + (power - 1.0) * math.log(x)
             - math.log(2.0 * p.mean_snr) - math.lgamma(p.mu) - p.mu * x ** (0.5 * p.alpha))
    return math.exp(log_f)


def alpha_mu_pdf_h(p, gamma):
    """PDF through its H-function form (consistency path for the Mellin machinery)."""
    return p.kappa * integrate_fox_h(p.pdf_spec(), p.lam * float(gamma)).value


def alpha_mu_cdf(p, gamma):
    """CDF through the H^{1,1}_{1,2} form."""
    gamma = float(gamma)
    if gamma < 0.0:
        raise DomainError(f"SNR must be non-negative, got {gamma}")
    if gamma == 0.0:
        return 0.0
    ev = integrate_fox_h(p.cdf_spec(), p.lam * gamma)
    scale = p.kappa / p.lam
    return clamp_probability(scale * ev.value, scale * ev.error, what="alpha-mu CDF")


def alpha_mu_cdf_closed(p, gamma):
    """Regularised lower incomplete gamma P(mu, mu (gamma/mean)^{alpha/2})."""
    gamma = np.asarray(gamma, dtype=float)
    return special.gammainc(p.mu, p.mu * (gamma / p.mean_snr) ** (0.5 * p.alpha))


def alpha_mu_sample(p, rng, size=None):
    """gamma = mean (X/mu)^{2/alpha}, X ~ Gamma(mu, 1)."""
    x = rng.gamma(p.mu, 1.0, size=size)
    return p.mean_snr * (x / p.mu) ** p.nu
