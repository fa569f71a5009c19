"""Hybrid pilot-aware attacker: silence cheating, wide-band and partial-band jamming."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, NotJammed


class AttackMode(enum.Enum):
    NO_ATTACKER = "none"
    SILENCE_CHEATING = "sc"
    WIDE_BAND = "wb-pj"
    PARTIAL_BAND = "pb-pj"

    @classmethod
    def parse(cls, s: str | "AttackMode") -> "AttackMode":
        if isinstance(s, cls):
            return s
        key = str(s).strip().lower().replace("_", "-")
        aliases = {"noattacker": "none", "no": "none", "silence": "sc", "wb": "wb-pj", "pb": "pb-pj"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class AttackerConfig:
    mode: AttackMode = AttackMode.NO_ATTACKER
    power: float = 1.0
    jammed: frozenset[int] = frozenset()
    # phase per (subcarrier, symbol); missing entries are drawn uniformly
    phases: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.power < 0:
            raise ValueError(f"attacker power must be >= 0, got {self.power}")
        object.__setattr__(self, "mode", AttackMode.parse(self.mode))
        object.__setattr__(self, "jammed", frozenset(int(j) for j in self.jammed))
        if self.mode is AttackMode.PARTIAL_BAND and not self.jammed:
            raise ValueError("partial-band jamming needs a non-empty jammed set")

    def jams(self, subcarrier: int, num_subcarriers: int) -> bool:
        if self.mode is AttackMode.WIDE_BAND:
            return 0 <= subcarrier < num_subcarriers
        if self.mode is AttackMode.PARTIAL_BAND:
            return subcarrier in self.jammed
        return False

    def footprint(self, num_subcarriers: int) -> np.ndarray:
        """Boolean mask of jammed subcarriers out of ``num_subcarriers``."""
        mask = np.zeros(num_subcarriers, dtype=bool)
        if self.mode is AttackMode.WIDE_BAND:
            mask[:] = True
        elif self.mode is AttackMode.PARTIAL_BAND:
            idx = np.fromiter(self.jammed, dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= num_subcarriers):
                raise IndexOutOfRange(f"jammed set exceeds [0, {num_subcarriers})")
            mask[idx] = True
        return mask


def apply_attack_counts(occ: np.ndarray, cfg: AttackerConfig) -> np.ndarray:
    """Add the attacker's single signal to every jammed subcarrier's count."""
    occ = np.asarray(occ, dtype=np.int64)
    if (occ < 0).any():
        raise ValueError("occupancy counts must be non-negative")
    return occ + cfg.footprint(occ.size)


def attacker_pilot_signal(
    cfg: AttackerConfig, subcarrier: int, symbol: int, rng=None, num_subcarriers: int | None = None
) -> complex:
    """Attacker pilot tone ``sqrt(power) * exp(j*phase)`` on a jammed subcarrier.

    Raises :class:`NotJammed` when the subcarrier lies outside the attack
    footprint; callers treat that as a zero contribution.
    """
    n = num_subcarriers if num_subcarriers is not None else subcarrier + 1
    if not cfg.jams(subcarrier, n):
        raise NotJammed(f"subcarrier {subcarrier} is not jammed in mode {cfg.mode.value}")
    phi = cfg.phases.get((subcarrier, symbol))
    if phi is None:
        rng = np.random.default_rng() if rng is None else rng
        phi = rng.uniform(0.0, 2.0 * math.pi)
    return complex(math.sqrt(cfg.power) * np.exp(1j * phi))
