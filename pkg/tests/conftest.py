# tests/conftest.py
import math
import os
import sys

import numpy as np
import pytest
from scipy import integrate, special

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from backend import config, data_store  # noqa: E402
from backend.channels import AlphaMuParams, EggParams, egg_pdf, alpha_mu_cdf_closed, alpha_mu_pdf  # noqa: E402
from backend.relay import LinkPair, RelayConfig  # noqa: E402
from backend.secrecy import EveParams  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_reports(tmp_path, monkeypatch):
    """Keep log and report files out of the repository."""
    reports = tmp_path / "reports"
    monkeypatch.setattr(config, "REPORTS_DIR", str(reports))
    monkeypatch.setattr(config, "LOG_FILE", str(reports / "aquaguard.log"))
    monkeypatch.setattr(config, "REPORT_FILE", str(reports / "selftest_report.txt"))
    monkeypatch.setattr(config, "VERBOSE", False)
    monkeypatch.setattr(config, "REL_TOL", 1e-9)
    return reports


@pytest.fixture(scope="session")
def registry():
    return data_store.load_presets(config.PRESETS_FILE)


@pytest.fixture
def smooth_egg():
    """Exponential / generalized-Gamma mixture with moderate shape, cheap for every path."""
    return EggParams(0.3, 1.2, 2.0, 0.8, 1.5, r=1, mu_r=10.0)


@pytest.fixture
def fresh_egg():
    """The shipped [2.4, 0.05] example preset at 10 dB."""
    return EggParams(0.2130, 0.3291, 1.4299, 1.1817, 17.1984, r=1, mu_r=10.0)


@pytest.fixture
def baseline_links(fresh_egg):
    return LinkPair(AlphaMuParams.from_db(1.6, 1.5, 20.0), fresh_egg)


@pytest.fixture
def baseline_eve():
    return EveParams.from_db(1.6, 1.5, 10.0)


@pytest.fixture
def smooth_links(smooth_egg):
    return LinkPair(AlphaMuParams.from_db(1.6, 1.5, 10.0), smooth_egg)


@pytest.fixture
def unit_relay():
    return RelayConfig.explicit(1.0)


def _egg_breaks(p):
    scales = [p.b ** p.r * p.mu_r]
    if p.omega > 0.0:
        scales.append(p.lam ** p.r * p.mu_r)
    pts = sorted({k * s for s in scales for k in (0.05, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0)})
    return [0.0] + pts + [math.inf]


def egg_expectation(p, func):
    """E[func(gamma2)] by piecewise adaptive quadrature of the EGG density."""
    breaks = _egg_breaks(p)
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        v, _ = integrate.quad(lambda y: egg_pdf(p, y) * func(y), lo, hi, limit=200, epsabs=1e-13, epsrel=1e-11)
        total += v
    return total


def cdf_by_quadrature(links, C, gamma):
    """Pr[gamma1 gamma2/(gamma2 + C) <= gamma] = E[F1(gamma (1 + C/gamma2))]."""
    return egg_expectation(links.uwoc, lambda y: float(alpha_mu_cdf_closed(links.rf, gamma * (1.0 + C / y))))


def pdf_by_quadrature(links, C, gamma):
    return egg_expectation(
        links.uwoc, lambda y: alpha_mu_pdf(links.rf, gamma * (1.0 + C / y)) * (1.0 + C / y)
    )


def rayleigh_sop_by_quadrature(links, eve, C, theta):
    """
    Pr[gamma_eq <= Theta gamma_e] for exponential gamma1 and gamma_e:
    Pr[gamma1 > k gamma_e] = m1/(m1 + k m_e) with k = Theta (1 + C/gamma2).
    """
    m1, me = links.rf.mean_snr, eve.mean_snr
    return 1.0 - egg_expectation(links.uwoc, lambda y: m1 / (m1 + theta * (1.0 + C / y) * me))


def rayleigh_inverse_snr(mean):
    """E[1/(1 + gamma)] = e^{1/m} E1(1/m)/m for an exponential SNR of mean m."""
    x = 1.0 / mean
    return x * math.exp(x) * float(special.exp1(x))


@pytest.fixture
def oracles():
    return {
        "cdf": cdf_by_quadrature,
        "pdf": pdf_by_quadrature,
        "rayleigh_sop": rayleigh_sop_by_quadrature,
        "rayleigh_inverse_snr": rayleigh_inverse_snr,
        "egg_expectation": egg_expectation,
    }


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
