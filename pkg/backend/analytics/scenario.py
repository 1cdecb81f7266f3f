# backend/analytics/scenario.py
import copy

import numpy as np

from .. import data_store
from ..errors import ConfigError, DomainError
from ..channels import AlphaMuParams, EggParams, db_to_linear
from ..relay import RelayConfig, LinkPair
from ..secrecy import SecrecyConfig, EveParams
from ..montecarlo import McConfig
from ..optimizer import PowerTarget

SWEEP_VARIABLES = ("rf_main.mean_snr_db", "rf_eve.mean_snr_db", "uwoc.mu_r_db", "secrecy.rate_rs")
SECTIONS = ("rf_main", "rf_eve", "uwoc", "relay", "secrecy")


def set_path(d, dotted, value):
    """Set d["a"]["b"] = value for dotted = "a.b" (creates intermediate objects)."""
    keys = dotted.split(".")
    node = d
    for k in keys[:-1]:
        node = node.setdefault(k, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot set '{dotted}': '{k}' is not an object", field=dotted)
    node[keys[-1]] = value


class SweepAxis:
    def __init__(self, variable, start, stop, points):
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(f"unknown sweep variable '{variable}' (one of {', '.join(SWEEP_VARIABLES)})",
                              field="sweep.variable")
        self.variable = variable
        self.start = float(start)
        self.stop = float(stop)
        self.points = int(points)
        if self.points < 1:
            raise ConfigError("sweep needs at least one point", field="sweep.points")

    def values(self):
        return [float(v) for v in np.linspace(self.start, self.stop, self.points)]


class Scenario:
    """
    A scenario file resolved into model objects.

    Fields: name, description, links (LinkPair), eve (EveParams), relay, secrecy, sweep (SweepAxis or None),
    mc (McConfig or None), optimize (PowerTarget or None), variants [(label, overrides)], cdf_grid.
    The raw dict is kept so variants and sweep points are applied as dotted-path overrides.
    """

    def __init__(self, raw, registry=None, text=None, source="<scenario>"):
        self.raw = raw
        self.text = text
        self.source = source
        self.registry = registry if registry is not None else data_store.load_presets()
        self.name = raw.get("name", "scenario")
        self.description = raw.get("description", "")
        for section in SECTIONS:
            if section not in raw:
                raise self._error(f"missing section '{section}'", section)
        self.rf_main = self._alpha_mu("rf_main", AlphaMuParams)
        self.eve = self._alpha_mu("rf_eve", EveParams)
        self.uwoc = self._uwoc()
        self.links = LinkPair(self.rf_main, self.uwoc)
        self.relay = self._relay()
        self.secrecy = self._secrecy()
        self.sweep = self._sweep()
        self.mc = self._mc()
        self.optimize = self._optimize()
        self.cdf_grid = [float(g) for g in raw.get("cdf_grid", [])]
        self.variants = self._variants()

    @classmethod
    def load(cls, path, registry=None):
        raw, text = data_store.load_scenario_dict(path)
        return cls(raw, registry, text, source=path)

    def _error(self, msg, field):
        leaf = field.split(".")[-1]
        return ConfigError(f"{self.source}: {msg}", field=field, line=data_store.line_of(self.text, leaf))

    def _section(self, name):
        sec = self.raw.get(name)
        if not isinstance(sec, dict):
            raise self._error(f"section '{name}' must be an object", name)
        return sec

    def _number(self, sec, section, key, default=None):
        if key not in sec:
            if default is not None:
                return default
            raise self._error(f"missing field '{key}'", f"{section}.{key}")
        v = sec[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise self._error(f"field '{key}' must be a number, got {v!r}", f"{section}.{key}")
        return float(v)

    def _alpha_mu(self, section, cls):
        sec = self._section(section)
        try:
            return cls.from_db(self._number(sec, section, "alpha"), self._number(sec, section, "mu"),
                               self._number(sec, section, "mean_snr_db"))
        except DomainError as e:
            raise self._error(str(e), section)

    def _uwoc(self):
        sec = self._section("uwoc")
        mu_r = db_to_linear(self._number(sec, "uwoc", "mu_r_db"))
        if "preset" in sec:
            params = self.registry.resolve(sec["preset"], mu_r)
            if "r" in sec:
                r = int(self._number(sec, "uwoc", "r"))
                try:
                    params = EggParams(params.omega, params.lam, params.a, params.b, params.c, r, mu_r)
                except DomainError as e:
                    raise self._error(str(e), "uwoc.r")
            return params
        try:
            return EggParams(
                self._number(sec, "uwoc", "omega"), self._number(sec, "uwoc", "lambda"),
                self._number(sec, "uwoc", "a"), self._number(sec, "uwoc", "b"), self._number(sec, "uwoc", "c"),
                int(self._number(sec, "uwoc", "r", 1.0)), mu_r,
            )
        except DomainError as e:
            raise self._error(str(e), "uwoc")

    def _relay(self):
        sec = self._section("relay")
        mode = sec.get("mode", "explicit_C")
        try:
            if mode == "explicit_C":
                return RelayConfig.explicit(self._number(sec, "relay", "C"))
            if mode == "from_powers":
                p1 = self._number(sec, "relay", "P1") if "P1" in sec else None
                return RelayConfig.from_powers(
                    P2=self._number(sec, "relay", "P2", 1.0), N0=self._number(sec, "relay", "N0", 1.0),
                    N1=self._number(sec, "relay", "N1", 1.0), P1=p1,
                )
        except DomainError as e:
            raise self._error(str(e), "relay")
        raise self._error(f"relay mode must be 'explicit_C' or 'from_powers', got '{mode}'", "relay.mode")

    def _secrecy(self):
        sec = self._section("secrecy")
        try:
            return SecrecyConfig(self._number(sec, "secrecy", "rate_rs", 0.0), sec.get("threshold_base", "natural"))
        except DomainError as e:
            raise self._error(str(e), "secrecy")

    def _sweep(self):
        sec = self.raw.get("sweep")
        if not sec:
            return None
        if not isinstance(sec, dict):
            raise self._error("sweep must be an object with exactly one axis", "sweep")
        return SweepAxis(sec.get("variable"), self._number(sec, "sweep", "start"),
                         self._number(sec, "sweep", "stop"), int(self._number(sec, "sweep", "points")))

    def _mc(self):
        sec = self.raw.get("mc")
        if not sec:
            return None
        try:
            return McConfig(sec.get("trials"), sec.get("master_seed"), sec.get("stream_count"))
        except (DomainError, TypeError, ValueError) as e:
            raise self._error(str(e), "mc")

    def _optimize(self):
        sec = self.raw.get("optimize")
        if not sec:
            return None
        try:
            return PowerTarget(sec.get("metric", "sop"), sec.get("target"), sec.get("search_lo"),
                               sec.get("search_hi"), sec.get("tol_db"))
        except (DomainError, TypeError, ValueError) as e:
            raise self._error(str(e), "optimize")

    def _variants(self):
        out = []
        for i, v in enumerate(self.raw.get("variants", [])):
            if not isinstance(v, dict) or not isinstance(v.get("set", {}), dict):
                raise self._error(f"variant {i} must be an object with a 'set' mapping", "variants")
            out.append((str(v.get("label", f"variant{i}")), dict(v.get("set", {}))))
        return out

    # derived scenarios

    def with_overrides(self, overrides):
        raw = copy.deepcopy(self.raw)
        raw.pop("variants", None)
        for path, value in overrides.items():
            set_path(raw, path, value)
        derived = Scenario(raw, self.registry, self.text, self.source)
        if not any(p.startswith("mc.") for p in overrides):
            derived.mc = self.mc
        return derived

    def at(self, variable, value):
        return self.with_overrides({variable: value})

    def expand_variants(self):
        """[(label, Scenario)]; a scenario without variants is its own single variant."""
        if not self.variants:
            return [("base", self)]
        return [(label, self.with_overrides(ov)) for label, ov in self.variants]
