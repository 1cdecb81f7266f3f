# backend/channels/egg.py
import math

import numpy as np
from scipy import special

from ..errors import DomainError
from ..mellin import FoxHSpec, integrate_fox_h, clamp_probability
from .alpha_mu import db_to_linear, linear_to_db


class EggParams:
    """
    Exponential-generalized-Gamma irradiance I of the underwater optical leg,

        f_I(I) = omega/lam e^{-I/lam} + (1-omega) c I^{ac-1} e^{-(I/b)^c} / (b^{ac} Gamma(a)),

    seen by the destination as the electrical SNR gamma2 = mu_r I^r
    (r = 1 heterodyne, r = 2 intensity modulation / direct detection).
    """

    def __init__(self, omega, lam, a, b, c, r=1, mu_r=1.0):
        self.omega = float(omega)
        self.lam = float(lam)
        self.a = float(a)
        self.b = float(b)
        self.c = float(c)
        self.mu_r = float(mu_r)
        if not 0.0 <= self.omega <= 1.0:
            raise DomainError(f"EGG mixture weight omega must lie in [0, 1], got {omega}")
        for name, v in (("lambda", self.lam), ("a", self.a), ("b", self.b), ("c", self.c), ("mu_r", self.mu_r)):
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"EGG parameter {name} must be positive, got {v}")
        if r not in (1, 2) or float(r) != int(r):
            raise DomainError(f"detection scheme r must be 1 or 2, got {r}")
        self.r = int(r)

    @classmethod
    def exponential_gamma(cls, omega, lam, a, b, r=1, mu_r=1.0):
        """c = 1: mixture of an exponential and a plain Gamma law."""
        return cls(omega, lam, a, b, 1.0, r, mu_r)

    @classmethod
    def generalized_gamma(cls, a, b, c, r=1, mu_r=1.0):
        """omega = 0: the generalized Gamma branch alone (lambda is then unused)."""
        return cls(0.0, 1.0, a, b, c, r, mu_r)

    def with_mu_r(self, mu_r):
        return EggParams(self.omega, self.lam, self.a, self.b, self.c, self.r, mu_r)

    def scaled(self, k):
        """Irradiance scaled by k (k < 1 gives a stochastically worse channel)."""
        return EggParams(self.omega, k * self.lam, self.a, k * self.b, self.c, self.r, self.mu_r)

    @property
    def mu_r_db(self):
        return linear_to_db(self.mu_r)

    @property
    def rho(self):
        return self.r / self.c

    def mean_snr(self):
        """E[gamma2] = mu_r E[I^r]."""
        exp_moment = math.gamma(1.0 + self.r) * self.lam ** self.r
        gg_moment = self.b ** self.r * math.exp(math.lgamma(self.a + self.r / self.c) - math.lgamma(self.a))
        return self.mu_r * (self.omega * exp_moment + (1.0 - self.omega) * gg_moment)

    def to_dict(self):
        return {
            "omega": self.omega, "lambda": self.lam, "a": self.a, "b": self.b, "c": self.c,
            "r": self.r, "mu_r_db": self.mu_r_db,
        }

    def __repr__(self):
        return (f"EGG(omega={self.omega:g}, lambda={self.lam:g}, a={self.a:g}, b={self.b:g}, "
                f"c={self.c:g}, r={self.r}, mu_r={self.mu_r_db:.2f} dB)")

    def mellin_terms(self):
        """
        The CCDF as a weighted sum of Mellin-Barnes integrals,

            P(gamma2 > y) = sum_k weight_k (1/2 pi i) int phi_k(s) (y/theta_k)^{-s} ds,

        returns list of UwocTerm (zero-weight branches dropped)
        """
        terms = []
        if self.omega < 1.0:
            terms.append(UwocTerm(
                "gg", (1.0 - self.omega) / math.gamma(self.a), self.b ** self.r * self.mu_r,
                [(0.0, 1.0), (self.a, self.rho)],
            ))
        if self.omega > 0.0:
            terms.append(UwocTerm("exp", self.r * self.omega, self.lam ** self.r * self.mu_r, [(0.0, float(self.r))]))
        return terms


class UwocTerm:
    """
    One branch of the EGG CCDF: phi(s) = prod Gamma(shift + scale s) over left_gammas,
    divided by Gamma(1 + s) for the "gg" branch.
    """

    def __init__(self, kind, weight, theta, left_gammas):
        self.kind = kind
        self.weight = weight
        self.theta = theta
        self.left_gammas = left_gammas

    def ccdf_spec(self):
        if self.kind == "gg":
            return FoxHSpec(2, 0, [(1.0, 1.0)], self.left_gammas)
        return FoxHSpec(1, 0, [], self.left_gammas)

    def pdf_spec(self):
        # s phi(s): the Gamma(s)/Gamma(1+s) pair cancels to 1, Gamma(rs) s = Gamma(1 + rs)/r
        if self.kind == "gg":
            return FoxHSpec(1, 0, [], [self.left_gammas[1]])
        shift, scale = self.left_gammas[0]
        return FoxHSpec(1, 0, [], [(shift + 1.0, scale)])

    def pdf_weight(self):
        return self.weight if self.kind == "gg" else self.weight / self.left_gammas[0][1]

    def __repr__(self):
        return f"UwocTerm({self.kind}, w={self.weight:.4g}, theta={self.theta:.4g})"


def egg_pdf(p, gamma):
    gamma = float(gamma)
    if gamma <= 0.0:
        raise DomainError(f"EGG density needs gamma > 0, got {gamma}")
    irr = (gamma / p.mu_r) ** (1.0 / p.r)
    out = 0.0
    if p.omega > 0.0:
        out += p.omega / (p.r * gamma) * (irr / p.lam) * math.exp(-irr / p.lam)
    if p.omega < 1.0:
        x = (irr / p.b) ** p.c
        log_gg = math.log(p.c) + p.a * math.log(x) - x - math.lgamma(p.a) - math.log(p.r * gamma)
        out += (1.0 - p.omega) * math.exp(log_gg)
    return out


def egg_pdf_h(p, gamma):
    """Density through the H-function forms of each branch."""
    gamma = float(gamma)
    total = 0.0
    for term in p.mellin_terms():
        total += term.pdf_weight() * integrate_fox_h(term.pdf_spec(), gamma / term.theta).value
    return total / gamma


def egg_ccdf(p, gamma):
    """CCDF as H^{2,0}_{1,2} (generalized Gamma) plus r omega H^{1,0}_{0,1} (exponential)."""
    gamma = float(gamma)
    if gamma <= 0.0:
        raise DomainError(f"EGG CCDF needs gamma > 0, got {gamma}")
    total = 0.0
    err = 0.0
    for term in p.mellin_terms():
        ev = integrate_fox_h(term.ccdf_spec(), gamma / term.theta)
        total += term.weight * ev.value
        err += term.weight * ev.error
    return clamp_probability(total, err, what="EGG CCDF")


def egg_ccdf_closed(p, gamma):
    gamma = np.asarray(gamma, dtype=float)
    irr = (gamma / p.mu_r) ** (1.0 / p.r)
    out = (1.0 - p.omega) * special.gammaincc(p.a, (irr / p.b) ** p.c)
    if p.omega > 0.0:
        out = out + p.omega * np.exp(-irr / p.lam)
    return out


def egg_sample(p, rng, size=None):
    """gamma2 = mu_r I^r with I drawn from the exponential / generalized Gamma mixture."""
    pick_exp = rng.random(size) < p.omega
    i_exp = rng.exponential(p.lam, size)
    i_gg = p.b * rng.gamma(p.a, 1.0, size) ** (1.0 / p.c)
    irr = np.where(pick_exp, i_exp, i_gg)
    out = p.mu_r * irr ** p.r
    return float(out) if size is None else out


def egg_from_db(omega, lam, a, b, c, r, mu_r_db):
    return EggParams(omega, lam, a, b, c, r, db_to_linear(mu_r_db))
