# backend/montecarlo/simulator.py
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import config, logger
from ..errors import DomainError
from ..channels import alpha_mu_sample, egg_sample
from ..relay import gamma_eq, resolve_constant
from ..monitors.resource_monitor import ResourceMonitor


class McConfig:
    """trials split over stream_count streams spawned from master_seed."""

    def __init__(self, trials=None, master_seed=None, stream_count=None):
        self.trials = config.DEFAULT_TRIALS if trials is None else int(trials)
        self.master_seed = config.DEFAULT_SEED if master_seed is None else int(master_seed)
        self.stream_count = config.DEFAULT_STREAMS if stream_count is None else int(stream_count)
        if self.trials < config.MIN_REPORTED_TRIALS:
            raise DomainError(f"Monte Carlo needs at least {config.MIN_REPORTED_TRIALS} trials, got {self.trials}")
        if self.stream_count < 1:
            raise DomainError(f"stream_count must be positive, got {self.stream_count}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise DomainError(f"master_seed must be an unsigned 64-bit integer, got {self.master_seed}")

    def stream_sizes(self):
        base, extra = divmod(self.trials, self.stream_count)
        return [base + (1 if i < extra else 0) for i in range(self.stream_count)]

    def streams(self):
        """One numpy Generator per stream; a pure function of (master_seed, stream index)."""
        children = np.random.SeedSequence(self.master_seed).spawn(self.stream_count)
        return [np.random.default_rng(c) for c in children]

    def to_dict(self):
        return {"trials": self.trials, "master_seed": self.master_seed, "stream_count": self.stream_count}

    def __repr__(self):
        return f"McConfig(trials={self.trials}, seed={self.master_seed}, streams={self.stream_count})"


class McEstimate:
    """Bernoulli proportion with std_error = sqrt(value (1 - value) / trials)."""

    def __init__(self, hits, trials):
        self.hits = int(hits)
        self.trials = int(trials)
        self.value = self.hits / self.trials
        self.std_error = math.sqrt(self.value * (1.0 - self.value) / self.trials)

    def interval(self, k=3.0):
        return self.value - k * self.std_error, self.value + k * self.std_error

    def contains(self, x, k=3.0):
        lo, hi = self.interval(k)
        return lo <= x <= hi

    def __repr__(self):
        return f"McEstimate({self.value:.6g} +/- {self.std_error:.2g}, n={self.trials})"


def _run_stream(rng, size, chunk, links, eve, C, theta, grid):
    """
    Draw `size` trials from one stream in chunks; count events.

    returns int64 array: [sop_exact, sop_lower, pnz, cdf(grid)...]
    """
    counts = np.zeros(3 + grid.size, dtype=np.int64)
    left = size
    while left > 0:
        n = min(chunk, left)
        left -= n
        g1 = alpha_mu_sample(links.rf, rng, size=n)
        g2 = egg_sample(links.uwoc, rng, size=n)
        geq = gamma_eq(g1, g2, C)
        if eve is not None:
            ge = alpha_mu_sample(eve, rng, size=n)
            counts[0] += np.count_nonzero(geq <= theta * ge + theta - 1.0)
            counts[1] += np.count_nonzero(geq <= theta * ge)
            counts[2] += np.count_nonzero(geq > ge)
        if grid.size:
            geq.sort()
            counts[3:] += np.searchsorted(geq, grid, side="right")
    return counts


def mc_all(links, eve, relay, sc, mc, gamma_grid=(), workers=None):
    """
    One simulation pass with common random numbers for every estimator.

    eve / sc may be None when only the end-to-end CDF is wanted.

    returns:
        {
            "sop_exact": McEstimate or None,
            "sop_lower": McEstimate or None,
            "pnz": McEstimate or None,
            "cdf": [McEstimate per grid point],
            "C": fixed-gain constant used
        }
    """
    C = resolve_constant(links, relay)
    theta = sc.theta if sc is not None else 1.0
    grid = np.asarray(list(gamma_grid), dtype=float)
    monitor = ResourceMonitor()
    if workers is None:
        workers = min(monitor.worker_count(mc.stream_count), monitor.chunk_slots(config.MC_CHUNK))
    chunk = config.MC_CHUNK
    sizes = mc.stream_sizes()
    rngs = mc.streams()

    logger.log(f"[MonteCarlo] {mc} on {workers} worker(s), chunk={chunk}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_stream, rng, size, chunk, links, eve, C, theta, grid)
            for rng, size in zip(rngs, sizes)
        ]
        # summed in stream order so the totals do not depend on completion order
        totals = sum((f.result() for f in futures), np.zeros(3 + grid.size, dtype=np.int64))

    result = {"sop_exact": None, "sop_lower": None, "pnz": None, "C": C}
    if eve is not None:
        result["sop_exact"] = McEstimate(totals[0], mc.trials)
        result["sop_lower"] = McEstimate(totals[1], mc.trials)
        result["pnz"] = McEstimate(totals[2], mc.trials)
    result["cdf"] = [McEstimate(h, mc.trials) for h in totals[3:]]
    return result


def mc_sop_exact(links, eve, relay, sc, mc):
    """Pr[gamma_eq <= Theta gamma_e + Theta - 1]."""
    return mc_all(links, eve, relay, sc, mc)["sop_exact"]


def mc_sop_lower(links, eve, relay, sc, mc):
    """Pr[gamma_eq <= Theta gamma_e]."""
    return mc_all(links, eve, relay, sc, mc)["sop_lower"]


def mc_pnz(links, eve, relay, mc):
    """Pr[gamma_eq > gamma_e]."""
    return mc_all(links, eve, relay, None, mc)["pnz"]


def mc_cdf_gamma_eq(links, relay, gamma_grid, mc):
    return mc_all(links, None, relay, None, mc, gamma_grid)["cdf"]
