# tests/test_optimizer.py
import pytest

from backend.errors import DomainError, InfeasibleError
from backend.relay import RelayConfig
from backend.secrecy import SecrecyConfig
from backend.optimizer import (
    PowerTarget,
    metric_at,
    min_power_for_target,
    saturation_floor,
    saturation_report,
)
from backend.optimizer import power


def _install(monkeypatch, exact, asymptote=None):
    monkeypatch.setattr(power, "metric_at", lambda links, eve, relay, sc, metric, x: exact(x))
    monkeypatch.setattr(power, "asymptote_at", lambda links, eve, relay, sc, metric, x: (asymptote or exact)(x))


def _search(t):
    return min_power_for_target(None, None, None, None, t)


# --------------------------------------------------
# target validation
# --------------------------------------------------
@pytest.mark.parametrize("kwargs", [
    {"metric": "capacity", "target": 0.1},
    {"metric": "sop", "target": 0.0},
    {"metric": "pnz", "target": 1.0},
    {"metric": "sop", "target": 0.1, "search_lo": 30.0, "search_hi": 10.0},
    {"metric": "sop", "target": 0.1, "tol_db": 0.0},
])
def test_power_target_validation(kwargs):
    with pytest.raises(DomainError):
        PowerTarget(**kwargs)


def test_target_direction():
    assert PowerTarget("sop", 0.1).met(0.05)
    assert not PowerTarget("sop", 0.1).met(0.2)
    assert PowerTarget("pnz", 0.9).met(0.95)
    assert "<=" in repr(PowerTarget("sop", 0.1))


# --------------------------------------------------
# search on synthetic monotone metrics
# --------------------------------------------------
def test_sop_target_is_bracketed_and_bisected(monkeypatch):
    _install(monkeypatch, lambda x: 10.0 ** (-x / 10.0))
    t = PowerTarget("sop", 0.01, tol_db=0.01)
    x = _search(t)
    assert 20.0 <= x <= 20.0 + t.tol_db


def test_pnz_target(monkeypatch):
    _install(monkeypatch, lambda x: 1.0 - 0.5 * 10.0 ** (-x / 10.0))
    t = PowerTarget("pnz", 0.9, tol_db=0.01)
    x = _search(t)
    assert t.met(1.0 - 0.5 * 10.0 ** (-x / 10.0))
    assert x == pytest.approx(6.9897, abs=0.02)


def test_misleading_asymptote_still_converges(monkeypatch):
    _install(monkeypatch, lambda x: 10.0 ** (-x / 10.0), asymptote=lambda x: 0.0)
    t = PowerTarget("sop", 0.01, tol_db=0.01)
    assert 20.0 <= _search(t) <= 20.01


def test_pessimistic_asymptote_still_converges(monkeypatch):
    _install(monkeypatch, lambda x: 10.0 ** (-x / 10.0), asymptote=lambda x: 1.0)
    t = PowerTarget("sop", 0.01, tol_db=0.01)
    assert 20.0 <= _search(t) <= 20.01


def test_already_met_returns_search_floor(monkeypatch):
    _install(monkeypatch, lambda x: 1e-6)
    assert _search(PowerTarget("sop", 0.01, search_lo=5.0)) == 5.0


def test_saturated_metric_is_infeasible(monkeypatch):
    _install(monkeypatch, lambda x: 0.05 + 10.0 ** (-x / 10.0))
    with pytest.raises(InfeasibleError) as info:
        _search(PowerTarget("sop", 0.01))
    assert "saturation floor" in str(info.value)


def test_saturation_report_on_synthetic_floor(monkeypatch):
    _install(monkeypatch, lambda x: 0.05 + 10.0 ** (-x / 10.0), asymptote=lambda x: 0.05)
    rep = saturation_report(None, None, None, None, "sop", tol_db=0.01)
    assert rep["floor"] == pytest.approx(0.05, rel=1e-3)
    assert rep["asymptotic"] == 0.05
    assert rep["search_hi_db"] == 50.0
    # within 5% of the floor once 10^(-x/10) <= 0.0025
    assert rep["onset_db"] == pytest.approx(26.02, abs=0.05)


# --------------------------------------------------
# real metrics
# --------------------------------------------------
@pytest.mark.slow
def test_search_recovers_a_known_crossing(baseline_links, baseline_eve):
    relay = RelayConfig.from_powers()
    sc = SecrecyConfig(0.01)
    target = metric_at(baseline_links, baseline_eve, relay, sc, "sop", 25.0)
    t = PowerTarget("sop", target, search_lo=10.0, search_hi=40.0, tol_db=0.1)
    x = min_power_for_target(baseline_links, baseline_eve, relay, sc, t)
    assert x == pytest.approx(25.0, abs=2.0 * t.tol_db)


@pytest.mark.slow
def test_floor_bounds_finite_snr_values_and_matches_asymptote(baseline_links, baseline_eve):
    relay = RelayConfig.from_powers()
    sc = SecrecyConfig(0.01)
    floor = saturation_floor(baseline_links, baseline_eve, relay, sc, "sop")
    for db in (10.0, 30.0):
        assert floor <= metric_at(baseline_links, baseline_eve, relay, sc, "sop", db)
    asym = power.asymptote_at(baseline_links, baseline_eve, relay, sc, "sop", 50.0)
    assert asym == pytest.approx(floor, rel=0.01)
