# backend/channels/presets.py
from ..errors import ConfigError, DomainError
from .egg import EggParams

PRESET_FIELDS = ("label", "omega", "lambda", "a", "b", "c", "r", "provenance")


class ChannelPreset:
    """
    Named EGG parameter set, e.g. "[2.4, 0.05]" for [bubble level L/min, temperature gradient degC/cm].
    The provenance string is mandatory.
    """

    def __init__(self, label, params, provenance):
        if not label:
            raise ConfigError("preset needs a label", field="label")
        if not provenance or not str(provenance).strip():
            raise ConfigError(f"preset '{label}' must declare its provenance", field="provenance")
        self.label = label
        self.params = params
        self.provenance = provenance

    @classmethod
    def from_dict(cls, d):
        missing = [k for k in PRESET_FIELDS if k not in d]
        if missing:
            raise ConfigError(f"preset entry is missing {', '.join(missing)}", field=missing[0])
        try:
            params = EggParams(d["omega"], d["lambda"], d["a"], d["b"], d["c"], d["r"])
        except (DomainError, TypeError, ValueError) as e:
            raise ConfigError(f"preset '{d.get('label')}': {e}", field="params")
        return cls(d["label"], params, d["provenance"])

    def __repr__(self):
        return f"ChannelPreset({self.label!r}, {self.params})"


class PresetRegistry:
    def __init__(self, presets=()):
        self.presets = {}
        for p in presets:
            if p.label in self.presets:
                raise ConfigError(f"duplicate preset label '{p.label}'", field="label")
            self.presets[p.label] = p

    def labels(self):
        return list(self.presets)

    def resolve(self, label, mu_r):
        """EggParams of the preset at the given electrical SNR scale."""
        if label not in self.presets:
            known = ", ".join(self.presets) or "none loaded"
            raise ConfigError(f"unknown UWOC preset '{label}' (known: {known})", field="uwoc.preset")
        return self.presets[label].params.with_mu_r(mu_r)
