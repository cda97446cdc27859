"""Flat ``key = value`` run configuration with ordinary-frequency inputs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .model import C_LIGHT, ProtocolTimeline, SystemParams

TWO_PI = 2 * math.pi


class ConfigError(ValueError):
    pass


SWEEP_KEYS = ("sweep_var", "sweep_min", "sweep_max", "sweep_count", "sweep_spacing")


@dataclass
class RunConfig:
    """Frequencies in Hz, velocities in m/s, times in s.

    ``g_over_Gamma`` may hold several values (one output file each).
    """

    gamma_hz: float = 0.1e6
    Gamma_hz: float = 2e6
    omega_ac_hz: float = 7.7e9
    g_over_Gamma: tuple = (30.0,)
    g_tilde_over_Gamma: float = 40.0
    gamma_tilde_hz: float | None = None
    n_opt: float = 2.4
    v_ac_mps: float = 6000.0
    T_m_K: float = 30.0
    k_per_m: float | None = None
    delta_a_over_Gamma: float | None = None
    delta_antistokes_over_Gamma: float | None = None
    tau1_s: float | None = None
    tau_d_s: float = 0.1e-9
    tau2_s: float = 3e-9
    seed: int = 0
    rtol: float = 1e-10
    atol: float = 1e-12
    samples: int = 400
    sweep_var: str | None = None
    sweep_min: float | None = None
    sweep_max: float | None = None
    sweep_count: int = 1
    sweep_spacing: str = "linear"
    source: str = field(default="<defaults>", repr=False)

    def __post_init__(self):
        if self.k_per_m is not None and self.delta_a_over_Gamma is not None:
            raise ConfigError("give either k_per_m or delta_a_over_Gamma, not both")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.sweep_var is not None:
            if self.sweep_var not in _KEYS or self.sweep_var in SWEEP_KEYS:
                raise ConfigError(f"sweep_var {self.sweep_var!r} is not a config key")
            if self.sweep_min is None or self.sweep_max is None:
                raise ConfigError("sweep_min and sweep_max are required with sweep_var")
            if self.sweep_count < 1:
                raise ConfigError("sweep_count must be >= 1")
            if self.sweep_min > self.sweep_max:
                raise ConfigError("sweep_min must not exceed sweep_max")
            if self.sweep_spacing not in ("linear", "log"):
                raise ConfigError("sweep_spacing must be 'linear' or 'log'")
            if self.sweep_spacing == "log" and self.sweep_min <= 0:
                raise ConfigError("log spacing needs sweep_min > 0")

    @property
    def Gamma(self) -> float:
        return TWO_PI * self.Gamma_hz

    @property
    def v_opt(self) -> float:
        return C_LIGHT / self.n_opt

    def k(self) -> float:
        if self.k_per_m is not None:
            return self.k_per_m
        if self.delta_a_over_Gamma is not None:
            return self.delta_a_over_Gamma * self.Gamma / self.v_opt
        return 0.0

    def params(self, g_over_Gamma: float | None = None) -> SystemParams:
        G = self.Gamma
        g = self.g_over_Gamma[0] if g_over_Gamma is None else g_over_Gamma
        dat = self.delta_antistokes_over_Gamma
        return SystemParams(
            gamma=TWO_PI * self.gamma_hz, Gamma=G, Omega_ac=TWO_PI * self.omega_ac_hz,
            g=g * G, g_tilde=self.g_tilde_over_Gamma * G,
            gamma_tilde=None if self.gamma_tilde_hz is None else TWO_PI * self.gamma_tilde_hz,
            v_opt=self.v_opt, v_ac=self.v_ac_mps, T_m=self.T_m_K, k=self.k(),
            delta_at=None if dat is None else dat * G)

    def timeline(self, tau1: float) -> ProtocolTimeline:
        return ProtocolTimeline(tau1, self.tau_d_s, self.tau2_s)

    def sweep_values(self) -> list[float]:
        import numpy as np

        if self.sweep_var is None:
            raise ConfigError("this command needs sweep_var/sweep_min/sweep_max")
        n, lo, hi = self.sweep_count, self.sweep_min, self.sweep_max
        if n == 1:
            return [lo]
        if self.sweep_spacing == "log":
            return list(np.geomspace(lo, hi, n))
        return list(np.linspace(lo, hi, n))

    def with_value(self, key: str, value) -> "RunConfig":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        if key == "k_per_m":
            data["delta_a_over_Gamma"] = None
        elif key == "delta_a_over_Gamma":
            data["k_per_m"] = None
        data[key] = (float(value),) if key == "g_over_Gamma" else value
        return RunConfig(**data)

    def header_items(self) -> list[tuple[str, str]]:
        """Resolved configuration, in input units, as ``(key, text)`` pairs."""
        p = self.params()
        out = []
        for f in fields(self):
            if f.name == "source":
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                text = ",".join(repr(float(x)) for x in v)
            else:
                text = "none" if v is None else repr(v)
            out.append((f.name, text))
        # derived quantities, converted back to Hz where applicable
        out += [
            ("derived.n_th", repr(p.n_th)),
            ("derived.k_per_m", repr(p.k)),
            ("derived.delta_a_hz", repr(p.delta_a / TWO_PI)),
            ("derived.delta_b_hz", repr(p.delta_b / TWO_PI)),
            ("derived.Gamma_hz", repr(p.Gamma / TWO_PI)),
            ("derived.gamma_hz", repr(p.gamma / TWO_PI)),
            ("derived.omega_ac_hz", repr(p.Omega_ac / TWO_PI)),
        ]
        return out


_KEYS = {f.name: f for f in fields(RunConfig) if f.name != "source"}
_INT_KEYS = {"seed", "samples", "sweep_count"}
_STR_KEYS = {"sweep_var", "sweep_spacing"}


def _convert(key: str, raw: str, where: str):
    if raw.lower() == "none":
        return None
    try:
        if key in _STR_KEYS:
            return raw
        if key in _INT_KEYS:
            return int(raw)
        if key == "g_over_Gamma":
            return tuple(float(x) for x in raw.split(","))
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse value {raw!r} for {key}") from None


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        values[key] = _convert(key, raw, where)
    try:
        return RunConfig(**values, source=source)
    except ConfigError as e:
        raise ConfigError(f"{source}: {e}") from None


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"{path}: {e.strerror}") from None
    return parse_config(text, path)
