"""Flat ``key = value`` run configuration with command-line overrides."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, fields
from pathlib import Path

OUT_DIR_ENV = "GFACCESS_OUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    trials: int = 1000
    out: str = ""

    # code-check / detect-sim (0 = derive)
    code_q: int = 0
    code_k: int = 2
    code_t: int = 0
    exhaustive: bool = True
    check_trials: int = 10000
    users: int = 4

    # detect-sim
    attack: str = "mixed"
    attack_power: float = 1.0
    jammed: str = ""
    count_mode: str = "ideal"
    window: int = 0
    noise_power: float = 1.0
    pf: float = 1e-4
    calib_trials: int = 100000
    pilot_snr_db: float = 20.0

    # system numerology
    n_t: int = 100
    active: int = 2
    k: int = 3
    q: int = 0
    n_r: int = 512
    n_e: int = 512
    n_d: int = 4
    delta_f: float = 60e3
    t_s: float = 17.86e-6
    t_extra: float = 0.0
    m_d: float = 18
    payload_bits: int = 256
    snr_db: float = 20.0
    lam: float = 0.0
    k_c: int = -1
    taps: int = 6
    xi: float = 1e-5

    # sinr-validate
    sinr_n_t: str = "25,50,100,200,400"
    sinr_lams: str = "0,0.2"
    sinr_snr_db: float = 10.0
    sinr_users: int = 4

    # tradeoff
    which: str = "latency"
    grid: str = "auto"

    def out_path(self) -> Path | None:
        if not self.out:
            return None
        p = Path(self.out)
        base = os.environ.get(OUT_DIR_ENV)
        if base and not p.is_absolute():
            p = Path(base) / p
        return p


FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw: str):
    kind = FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "int":
            return int(float(raw)) if raw.lower().count("e") else int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def parse_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def load(path: str | None, overrides: dict[str, str] | None = None) -> RunConfig:
    values = {}
    if path:
        try:
            values.update(parse_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    for key, raw in (overrides or {}).items():
        if raw is None:
            continue
        if key not in FIELD_TYPES:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = _convert(key, str(raw))
    return dataclasses.replace(RunConfig(), **values)


def float_list(s: str) -> list[float]:
    return [float(x) for x in s.replace(";", ",").split(",") if x.strip()]
