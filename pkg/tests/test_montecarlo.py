# tests/test_montecarlo.py
import math

import pytest

from backend import config
from backend.errors import DomainError
from backend.channels import AlphaMuParams, EggParams
from backend.relay import LinkPair, RelayConfig, resolve_constant
from backend.secrecy import EveParams, SecrecyConfig
from backend.montecarlo import (
    McConfig,
    McEstimate,
    mc_all,
    mc_cdf_gamma_eq,
    mc_pnz,
    mc_sop_exact,
    mc_sop_lower,
)


@pytest.fixture
def small_mc():
    return McConfig(200_000, 99, 4)


def _hits(result):
    return [result[k].hits for k in ("sop_exact", "sop_lower", "pnz")]


# --------------------------------------------------
# configuration
# --------------------------------------------------
def test_mc_config_defaults():
    mc = McConfig()
    assert (mc.trials, mc.master_seed, mc.stream_count) == (
        config.DEFAULT_TRIALS, config.DEFAULT_SEED, config.DEFAULT_STREAMS,
    )


@pytest.mark.parametrize("kwargs", [
    {"trials": 10},
    {"stream_count": 0},
    {"master_seed": -1},
    {"master_seed": 2 ** 64},
])
def test_mc_config_validation(kwargs):
    with pytest.raises(DomainError):
        McConfig(**kwargs)


def test_stream_sizes_cover_all_trials():
    mc = McConfig(10_003, 1, 4)
    sizes = mc.stream_sizes()
    assert sum(sizes) == 10_003
    assert max(sizes) - min(sizes) <= 1


def test_streams_depend_only_on_seed():
    a = [g.random() for g in McConfig(1_000, 5, 3).streams()]
    b = [g.random() for g in McConfig(1_000, 5, 3).streams()]
    c = [g.random() for g in McConfig(1_000, 6, 3).streams()]
    assert a == b
    assert a != c


def test_estimate_standard_error():
    est = McEstimate(25, 100)
    assert est.value == 0.25
    assert est.std_error == pytest.approx(math.sqrt(0.25 * 0.75 / 100))
    lo, hi = est.interval(2.0)
    assert lo == pytest.approx(0.25 - 2.0 * est.std_error)
    assert est.contains(0.3, k=3.0)
    assert not est.contains(0.5, k=3.0)


# --------------------------------------------------
# reproducibility and event structure
# --------------------------------------------------
def test_same_seed_gives_identical_counts(smooth_links, baseline_eve, unit_relay, small_mc):
    sc = SecrecyConfig(0.1)
    first = mc_all(smooth_links, baseline_eve, unit_relay, sc, small_mc)
    second = mc_all(smooth_links, baseline_eve, unit_relay, sc, small_mc)
    assert _hits(first) == _hits(second)


def test_counts_do_not_depend_on_worker_count(smooth_links, baseline_eve, unit_relay, small_mc):
    sc = SecrecyConfig(0.1)
    serial = mc_all(smooth_links, baseline_eve, unit_relay, sc, small_mc, workers=1)
    pooled = mc_all(smooth_links, baseline_eve, unit_relay, sc, small_mc, workers=4)
    assert _hits(serial) == _hits(pooled)


def test_exact_outage_contains_lower_bound_event(smooth_links, baseline_eve, unit_relay, small_mc):
    res = mc_all(smooth_links, baseline_eve, unit_relay, SecrecyConfig(0.5), small_mc)
    assert res["sop_exact"].hits >= res["sop_lower"].hits


def test_zero_rate_splits_trials(smooth_links, baseline_eve, unit_relay, small_mc):
    res = mc_all(smooth_links, baseline_eve, unit_relay, SecrecyConfig(0.0), small_mc)
    assert res["sop_lower"].hits + res["pnz"].hits == small_mc.trials
    assert res["sop_exact"].hits == res["sop_lower"].hits


def test_single_metric_helpers_share_the_pass(smooth_links, baseline_eve, unit_relay, small_mc):
    sc = SecrecyConfig(0.1)
    res = mc_all(smooth_links, baseline_eve, unit_relay, sc, small_mc)
    assert mc_sop_exact(smooth_links, baseline_eve, unit_relay, sc, small_mc).hits == res["sop_exact"].hits
    assert mc_sop_lower(smooth_links, baseline_eve, unit_relay, sc, small_mc).hits == res["sop_lower"].hits
    assert mc_pnz(smooth_links, baseline_eve, unit_relay, small_mc).hits == \
        mc_all(smooth_links, baseline_eve, unit_relay, None, small_mc)["pnz"].hits


def test_cdf_only_run_skips_secrecy_events(smooth_links, unit_relay, small_mc):
    res = mc_all(smooth_links, None, unit_relay, None, small_mc, gamma_grid=[0.5, 1.0])
    assert res["sop_exact"] is None and res["pnz"] is None
    assert len(res["cdf"]) == 2
    assert res["cdf"][0].hits <= res["cdf"][1].hits


def test_reports_the_resolved_constant(smooth_links, baseline_eve, small_mc):
    relay = RelayConfig.from_powers()
    res = mc_all(smooth_links, baseline_eve, relay, SecrecyConfig(0.0), small_mc)
    assert res["C"] == pytest.approx(resolve_constant(smooth_links, relay))


# --------------------------------------------------
# agreement with quadrature
# --------------------------------------------------
def test_empirical_cdf_matches_quadrature(smooth_links, unit_relay, small_mc, oracles):
    grid = [0.3, 2.0, 6.0]
    for g, est in zip(grid, mc_cdf_gamma_eq(smooth_links, unit_relay, grid, small_mc)):
        assert est.contains(oracles["cdf"](smooth_links, 1.0, g), k=3.0)


def test_lower_bound_estimate_matches_rayleigh_quadrature(smooth_egg, unit_relay, small_mc, oracles):
    links = LinkPair(AlphaMuParams.rayleigh(10.0), smooth_egg)
    eve = EveParams.rayleigh(2.0)
    sc = SecrecyConfig(0.1)
    est = mc_sop_lower(links, eve, unit_relay, sc, small_mc)
    assert est.contains(oracles["rayleigh_sop"](links, eve, 1.0, sc.theta), k=3.0)


def test_symmetric_links_with_transparent_relay_split_evenly(small_mc):
    # a near-noiseless optical hop leaves gamma_eq ~ gamma1, identically distributed with gamma_e
    clear = EggParams.generalized_gamma(40.0, 1.0, 1.0, mu_r=1e9)
    links = LinkPair(AlphaMuParams(2.1, 1.4, 1.0), clear)
    est = mc_pnz(links, EveParams(2.1, 1.4, 1.0), RelayConfig.explicit(1e-6), small_mc)
    assert est.contains(0.5, k=3.0)
