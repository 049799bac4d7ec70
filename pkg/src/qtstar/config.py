"""TOML run configuration.

Physical keys carry their unit in the name (``alpha_m2_per_s``); the bare names
(``alpha``) are accepted as aliases, e.g. for natural-unit desk configs. Giving both
spellings of one key, or an unknown key, is a validation error.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .core import DomainError, GalileanConfig, SternGerlachScenario, max_decoherence_time


class ConfigError(ValueError):
    """Unparseable or invalid configuration."""


GALILEAN_KEYS = {
    "hbar": "hbar_J_s",
    "alpha": "alpha_m2_per_s",
    "beta": "beta_m2_per_s3",
    "delta_t": "delta_t_s",
    "delta_t_over_tau": None,
    "mass": "mass_kg",
}

SG_KEYS = {
    "m1": "m1_kg",
    "m2": "m2_kg",
    "u": "u_m_per_s",
    "L": "L_m",
    "dBdz": "dBdz_T_per_m",
    "mu_B": "mu_B_J_per_T",
    "A": "A_m",
    "d1": "d1_m",
    "v0_strength": "v0_strength_J_m",
    "C": "C_m",
}

# free-form sections read by individual commands
COMMAND_SECTIONS = ("params", "grid", "figure1", "evolve", "collision", "overlap")


def _canonical(table: dict, keys: dict, where: str) -> dict:
    out = {}
    lookup = {}
    for bare, suffixed in keys.items():
        lookup[bare] = bare
        if suffixed:
            lookup[suffixed] = bare
    for key, value in table.items():
        if isinstance(value, dict):
            continue
        if key not in lookup:
            raise ConfigError(f"{where}: unknown key {key!r}")
        bare = lookup[key]
        if bare in out:
            raise ConfigError(f"{where}: {bare!r} given more than once")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: {key!r} must be a number, got {value!r}")
        out[bare] = float(value)
    return out


@dataclass(frozen=True)
class RunConfig:
    galilean: GalileanConfig
    delta_t_over_tau: float | None
    mass: float | None
    stern_gerlach: SternGerlachScenario | None
    sections: dict = field(default_factory=dict)
    digest: str = ""
    path: str = ""

    def section(self, name: str) -> dict:
        return dict(self.sections.get(name, {}))

    def delta_t_for(self, mass: float) -> tuple[float, str]:
        """Duration for a given mass and a note on where it came from."""
        if self.galilean.delta_t is not None:
            return self.galilean.delta_t, "config delta_t"
        tau = max_decoherence_time(self.galilean, mass)
        if self.delta_t_over_tau is not None:
            return self.delta_t_over_tau * tau, f"{self.delta_t_over_tau:g} x tau"
        return tau, "defaulted to tau"


def digest_of(data: dict) -> str:
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def parse_config(text: str, path: str = "<string>") -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    unknown = [k for k, v in raw.items() if isinstance(v, dict) and k not in COMMAND_SECTIONS + ("stern_gerlach",)]
    if unknown:
        raise ConfigError(f"{path}: unknown section(s) {unknown}")
    top = _canonical(raw, GALILEAN_KEYS, path)
    if "delta_t" in top and "delta_t_over_tau" in top:
        raise ConfigError(f"{path}: give either delta_t or delta_t_over_tau, not both")
    try:
        cfg = GalileanConfig(
            **{k: top[k] for k in ("hbar", "alpha", "beta") if k in top},
            delta_t=top.get("delta_t"),
        )
        sg = None
        if "stern_gerlach" in raw:
            sg = SternGerlachScenario(**_canonical(raw["stern_gerlach"], SG_KEYS, f"{path} [stern_gerlach]"))
        if "mass" in top and not top["mass"] > 0:
            raise DomainError("mass must be positive")
        if "delta_t_over_tau" in top and not top["delta_t_over_tau"] >= 0:
            raise DomainError("delta_t_over_tau must be non-negative")
    except DomainError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    sections = {k: v for k, v in raw.items() if k in COMMAND_SECTIONS}
    return RunConfig(cfg, top.get("delta_t_over_tau"), top.get("mass"), sg, sections, digest_of(raw), path)


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from None
    return parse_config(text, str(p))
