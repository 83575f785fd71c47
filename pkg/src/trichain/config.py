"""Run configuration: JSON schema, validation, defaults, canonical hashing.

Frequencies in config files are cyclic and carry their unit in the key
suffix (``_ghz``/``_mhz``); times are ``_ns``/``_us``.  Parsing is strict:
unknown keys are errors, missing required keys are reported together.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .device import DeviceParams, ghz_to_angular, mhz_to_angular
from .errors import ConfigError
from .open_system import NoiseParams
from .pulses import PulseSchedule, schedule_from_calibration

SCHEMA_VERSION = "1"

_DEVICE_KEYS = {"freq_ghz", "anharm_mhz", "g_mhz", "levels"}
_PULSE_KEYS = {"interaction_ghz", "delta1_mhz", "delta3_mhz", "t_hold_ns", "sigma_ns"}
_NOISE_KEYS = {"t1_us", "tphi_us"}
_INTEGRATOR_KEYS = {"dt_ns", "dt_open_ns", "verify"}
_TOP_KEYS = {"device", "pulse", "noise", "integrator", "scenario"}


def _require(section: dict, keys, where: str):
    missing = [k for k in keys if k not in section]
    if missing:
        raise ConfigError(f"missing required keys in {where}: {', '.join(missing)}")


def _reject_unknown(section: dict, allowed, where: str):
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(unknown)}")


def _triple(value, where: str) -> tuple[float, float, float]:
    if np.isscalar(value):
        return (float(value),) * 3
    if len(value) != 3:
        raise ConfigError(f"{where} must be a scalar or a list of 3 values")
    return tuple(float(v) for v in value)


@dataclass
class IntegratorConfig:
    dt_ns: float = 0.01
    dt_open_ns: float = 0.005
    verify: bool = True


@dataclass
class PulseConfig:
    interaction_ghz: float
    delta1_mhz: float = 0.0
    delta3_mhz: float = 0.0
    t_hold_ns: float | None = None
    sigma_ns: float = 1.0


@dataclass
class RunConfig:
    device: DeviceParams
    pulse: PulseConfig
    noise: NoiseParams | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    scenario: str | None = None
    raw: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]

    def schedule(self) -> PulseSchedule:
        if self.pulse.t_hold_ns is None:
            raise ConfigError("pulse.t_hold_ns is not set; run `calibrate` or set it")
        return schedule_from_calibration(
            self.device.omega_idle,
            float(ghz_to_angular(self.pulse.interaction_ghz)),
            float(mhz_to_angular(self.pulse.delta1_mhz)),
            float(mhz_to_angular(self.pulse.delta3_mhz)),
            self.pulse.t_hold_ns,
            self.pulse.sigma_ns,
        )

    def artifact_header(self, dt: float | None = None, verification=None) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config_hash": self.config_hash,
            "dt_ns": self.integrator.dt_ns if dt is None else dt,
            "verification": verification,
        }


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("top-level config must be a JSON object")
    return config_from_dict(data)


def config_from_dict(data: dict[str, Any]) -> RunConfig:
    _reject_unknown(data, _TOP_KEYS, "config")
    _require(data, ["device"], "config")

    dev = data["device"]
    _reject_unknown(dev, _DEVICE_KEYS, "device")
    _require(dev, ["freq_ghz", "anharm_mhz", "g_mhz"], "device")
    freqs = _triple(dev["freq_ghz"], "device.freq_ghz")
    anh = _triple(dev["anharm_mhz"], "device.anharm_mhz")
    g = dev["g_mhz"]
    if np.isscalar(g):
        g = (float(g), float(g))
    elif len(g) == 2:
        g = (float(g[0]), float(g[1]))
    else:
        raise ConfigError("device.g_mhz must be a scalar or a list of 2 values")
    device = DeviceParams(
        freq_ghz=freqs, anharm_mhz=anh, g_mhz=g, levels=int(dev.get("levels", 4))
    )
    if any(not 1.0 <= f <= 20.0 for f in freqs):
        warnings.warn(
            f"idle frequencies {freqs} GHz are outside the usual 1-20 GHz band",
            stacklevel=2,
        )

    pulse_raw = data.get("pulse", {})
    _reject_unknown(pulse_raw, _PULSE_KEYS, "pulse")
    # default interaction point: where the middle-qubit anharmonicity cancels
    # the detuning (the coupling switch-off condition)
    default_interaction = freqs[1] - anh[1] / 1e3
    t_hold = pulse_raw.get("t_hold_ns")
    pulse = PulseConfig(
        interaction_ghz=float(pulse_raw.get("interaction_ghz", default_interaction)),
        delta1_mhz=float(pulse_raw.get("delta1_mhz", 0.0)),
        delta3_mhz=float(pulse_raw.get("delta3_mhz", 0.0)),
        t_hold_ns=None if t_hold is None else float(t_hold),
        sigma_ns=float(pulse_raw.get("sigma_ns", 1.0)),
    )

    noise = None
    if "noise" in data and data["noise"]:
        noise_raw = data["noise"]
        _reject_unknown(noise_raw, _NOISE_KEYS, "noise")

        def _time(value):
            if value is None:
                return np.inf
            if np.isscalar(value):
                return float(value)
            return tuple(float(v) for v in value)

        noise = NoiseParams(
            t1_us=_time(noise_raw.get("t1_us")),
            tphi_us=_time(noise_raw.get("tphi_us")),
        )

    integ_raw = data.get("integrator", {})
    _reject_unknown(integ_raw, _INTEGRATOR_KEYS, "integrator")
    integrator = IntegratorConfig(
        dt_ns=float(integ_raw.get("dt_ns", 0.01)),
        dt_open_ns=float(integ_raw.get("dt_open_ns", 0.005)),
        verify=bool(integ_raw.get("verify", True)),
    )

    scenario = data.get("scenario")
    return RunConfig(
        device=device,
        pulse=pulse,
        noise=noise,
        integrator=integrator,
        scenario=scenario,
        raw=data,
    )


def table1_config() -> RunConfig:
    """The shipped default device (Table-I-style transmon/CSFQ chain)."""
    return config_from_dict(
        {
            "device": {
                "freq_ghz": [5.15, 6.35, 5.30],
                "anharm_mhz": [-350.0, 350.0, -350.0],
                "g_mhz": [45.0, 45.0],
                "levels": 4,
            },
            "pulse": {"interaction_ghz": 6.00, "sigma_ns": 1.0},
        }
    )
