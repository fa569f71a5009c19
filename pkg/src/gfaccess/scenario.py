"""Random access scenarios for exercising the activity detector."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import AttackerConfig, AttackMode, apply_attack_counts, attacker_pilot_signal
from .channel import crandn, draw_cir, to_subcarrier
from .code import H2dfCode, column_counts, covered_columns, encode_pilot
from .detection import DetectionConfig, count_signals

ALL_MODES = tuple(AttackMode)


@dataclass(frozen=True)
class Scenario:
    phases: dict  # user -> phase index
    columns: frozenset[int]
    attack: AttackerConfig

    @property
    def expected_mode(self) -> AttackMode:
        """Mode as observable from counts: an idle attacker looks like silence."""
        if self.attack.mode in (AttackMode.NO_ATTACKER, AttackMode.SILENCE_CHEATING):
            return AttackMode.SILENCE_CHEATING if self.columns else AttackMode.NO_ATTACKER
        return self.attack.mode


def admissible_jam_set(code: H2dfCode, columns, jammed) -> bool:
    """Partial-band sets that the detector can tell apart from user traffic.

    The set must be non-empty, avoid the users' footprint, leave some
    subcarrier idle, and must not complete any other codeword together with
    the footprint (otherwise an extra user is indistinguishable from jamming).
    """
    fp = column_counts(code, columns) > 0
    mask = np.zeros(code.length, dtype=bool)
    mask[list(jammed)] = True
    if not mask.any() or (mask & fp).any() or (mask | fp).all():
        return False
    return set(covered_columns(code, mask | fp).tolist()) == set(columns)


def sample_jam_set(code: H2dfCode, columns, rng, tries: int = 200) -> frozenset[int] | None:
    """Uniform draw among admissible partial-band sets (rejection sampling)."""
    fp = column_counts(code, columns) > 0
    free = np.flatnonzero(~fp)
    for _ in range(tries):
        pick = free[rng.random(free.size) < 0.5]
        if admissible_jam_set(code, columns, pick):
            return frozenset(int(j) for j in pick)
    return None


def random_scenario(code: H2dfCode, rng, modes=ALL_MODES, attack_power: float = 1.0) -> Scenario:
    G = code.num_users
    while True:
        n = int(rng.integers(0, G + 1))
        users = sorted(rng.choice(G, n, replace=False).tolist())
        phases = {u: int(rng.integers(0, code.cluster_size)) for u in users}
        cols = frozenset(encode_pilot(code, u, p).column for u, p in phases.items())
        mode = modes[int(rng.integers(0, len(modes)))]
        if mode is AttackMode.PARTIAL_BAND:
            jam = sample_jam_set(code, cols, rng)
            if jam is None:
                continue
            attack = AttackerConfig(mode, attack_power, jam)
        else:
            attack = AttackerConfig(mode, attack_power)
        return Scenario(phases, cols, attack)


def exact_counts(code: H2dfCode, scenario: Scenario) -> np.ndarray:
    return apply_attack_counts(column_counts(code, scenario.columns), scenario.attack)


def observed_counts(
    code: H2dfCode,
    scenario: Scenario,
    det: DetectionConfig,
    rng,
    *,
    n_t: int = 100,
    snr_db: float = 20.0,
    taps: int = 6,
    n_e: int = 512,
) -> np.ndarray:
    """Counts estimated from simulated pilot observations on every coding subcarrier.

    Each active user and the attacker get an independent multipath channel;
    user pilots carry a random phase from the pilot alphabet per symbol.
    Coding subcarrier ``j`` sits at FFT bin ``3j mod n_e``.
    """
    rho = det.noise_power * 10.0 ** (snr_db / 10.0)
    S = det.symbols
    cols = sorted(scenario.columns)
    cirs = [draw_cir(taps, n_t, rng=rng) for _ in cols]
    cir_a = draw_cir(taps, n_t, rng=rng)
    attack = scenario.attack if scenario.attack.mode is not AttackMode.SILENCE_CHEATING else None
    if attack is not None and attack.mode is not AttackMode.NO_ATTACKER:
        attack = AttackerConfig(attack.mode, rho, attack.jammed)
    rows = code.rows
    counts = np.zeros(code.length, dtype=np.int64)
    for j in range(code.length):
        b = (3 * j) % n_e
        y = crandn(rng, S, n_t) * math.sqrt(det.noise_power)
        for c, cir in zip(cols, cirs):
            if j in rows[c]:
                phi = 2 * np.pi * rng.integers(0, code.size, S) / code.size
                y += np.outer(math.sqrt(rho) * np.exp(1j * phi), to_subcarrier(cir, b, n_e))
        if attack is not None and attack.jams(j, code.length):
            x = np.array([attacker_pilot_signal(attack, j, k, rng, code.length) for k in range(S)])
            y += np.outer(x, to_subcarrier(cir_a, b, n_e))
        counts[j] = count_signals(y, det)
    return counts
