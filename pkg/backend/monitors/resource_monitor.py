# backend/monitors/resource_monitor.py
import collections
import os
import time

import psutil

from .. import config, logger

# bytes held per Monte Carlo draw (gamma1, gamma2, gamma_e, gamma_eq and masks)
BYTES_PER_DRAW = 48


class ResourceMonitor:
    """
    Samples CPU / memory of the host and of this process, and sizes worker pools and
    Monte Carlo chunks from them.
    """

    def __init__(self, history_len=120):
        self.history = collections.deque(maxlen=history_len)
        self.process = psutil.Process(os.getpid())
        self.peak_rss_mb = 0.0
        self.started = time.time()

    def sample(self):
        """
        returns:
            {
                "ts": timestamp,
                "cpu_count": logical CPUs,
                "cpu": host CPU percent,
                "ram": host RAM percent,
                "available_mb": float,
                "rss_mb": float (this process)
            }
        """
        try:
            mem = psutil.virtual_memory()
            rss_mb = self.process.memory_info().rss / (1024 * 1024)
            info = {
                "ts": time.time(),
                "cpu_count": psutil.cpu_count(logical=True) or 1,
                "cpu": psutil.cpu_percent(interval=None),
                "ram": mem.percent,
                "available_mb": mem.available / (1024 * 1024),
                "rss_mb": rss_mb,
            }
        except Exception as e:
            logger.log(f"[ResourceMonitor] sample failed: {e}")
            info = {"ts": time.time(), "cpu_count": 1, "cpu": 0.0, "ram": 0.0,
                    "available_mb": 512.0, "rss_mb": 0.0}

        self.peak_rss_mb = max(self.peak_rss_mb, info["rss_mb"])
        self.history.append(info)
        return info

    def worker_count(self, tasks):
        """Threads to use for `tasks` independent jobs."""
        info = self.sample()
        busy = info["cpu"] > 90.0
        n = info["cpu_count"] - (1 if busy else 0)
        return max(1, min(config.MAX_WORKERS, n, int(tasks)))

    def chunk_slots(self, chunk):
        """How many Monte Carlo chunks fit in a quarter of the free RAM at once."""
        info = self.sample()
        budget = 0.25 * info["available_mb"] * 1024 * 1024
        return max(1, int(budget // (chunk * BYTES_PER_DRAW)))

    def summary(self):
        """
        returns:
            {
                "elapsed_s": float,
                "peak_rss_mb": float,
                "samples": int
            }
        """
        self.sample()
        return {
            "elapsed_s": time.time() - self.started,
            "peak_rss_mb": self.peak_rss_mb,
            "samples": len(self.history),
        }
