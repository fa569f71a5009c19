"""Per-subcarrier signal counting and user activity detection under hybrid attack."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .attack import AttackMode
from .code import H2dfCode, column_counts, covered_columns, decompose, phase_of
from .errors import (
    AmbiguousDecomposition,
    DegenerateMatrixWarning,
    InsufficientTrials,
    LengthMismatch,
    NotDecomposable,
    UndecodableObservation,
)

EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class DetectionConfig:
    window: int = 4  # X; the observation spans X + 2 symbols
    noise_power: float = 1.0
    threshold: float = 2.0
    target_pf: float = 1e-3

    def __post_init__(self):
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if self.noise_power <= 0:
            raise ValueError("noise power must be positive")
        if self.threshold < 1:
            raise ValueError("eigenvalue-ratio threshold must be >= 1")
        if not 0 <= self.target_pf < 1:
            raise ValueError("target_pf must lie in [0, 1)")

    @property
    def symbols(self) -> int:
        return self.window + 2


@dataclass(frozen=True)
class ActivityReport:
    mode: AttackMode
    num_alus: int
    alu_codewords: frozenset[int]
    alu_identities: frozenset[int]

    def csv_fields(self) -> list[str]:
        return [self.mode.value, str(self.num_alus), ";".join(str(c) for c in sorted(self.alu_codewords))]


def _ordered_eigs(rx: np.ndarray, noise_power: float) -> np.ndarray:
    r = rx @ rx.conj().swapaxes(-1, -2) / noise_power
    return np.linalg.eigvalsh(r)


def count_signals(rx_matrix: np.ndarray, cfg: DetectionConfig) -> int:
    """Number of coexisting signals in an (X+2) x N_T observation.

    Eigenvalues of ``Y Y^H / sigma^2`` are sorted ascending and every ratio
    ``lambda_i / lambda_1`` above the threshold counts as one signal.
    """
    rx = np.asarray(rx_matrix)
    if rx.ndim != 2:
        raise LengthMismatch("rx_matrix must be 2-D")
    lam = _ordered_eigs(rx, cfg.noise_power)
    top = lam[-1]
    if top <= 0:
        return 0
    if lam[0] <= EIG_FLOOR * top:
        warnings.warn(
            "smallest eigenvalue vanished; counting against the noise level instead",
            DegenerateMatrixWarning,
            stacklevel=2,
        )
        # a noise-only eigenvalue of Y Y^H / sigma^2 sits near N_T
        return int((lam > cfg.threshold * rx.shape[1]).sum())
    return int((lam / lam[0] > cfg.threshold).sum())


def noise_ratio_samples(n_t: int, window: int, trials: int, rng, chunk: int = 4096) -> np.ndarray:
    """lambda_max / lambda_min of noise-only observations, one per trial."""
    rows = window + 2
    out = np.empty(trials)
    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        y = rng.standard_normal((n, rows, n_t)) + 1j * rng.standard_normal((n, rows, n_t))
        lam = _ordered_eigs(y, 2.0)
        lam = np.maximum(lam, EIG_FLOOR * lam[:, -1:])
        out[start : start + n] = lam[:, -1] / lam[:, 0]
    return out


def calibrate_threshold(n_t: int, window: int, target_pf: float, trials: int, rng) -> float:
    """Empirical (1 - target_pf) quantile of the noise-only eigenvalue ratio."""
    if not 0 < target_pf < 1:
        raise ValueError("target_pf must lie in (0, 1)")
    if trials < 1000 or trials * target_pf < 10:
        raise InsufficientTrials(
            f"{trials} trials give {trials * target_pf:g} expected exceedances; need >= 1000 trials and >= 10"
        )
    ratios = noise_ratio_samples(n_t, window, trials, rng)
    return float(max(np.quantile(ratios, 1.0 - target_pf), 1.0))


# ---------------------------------------------------------------------------
# activity detection


def _distinct_users(code: H2dfCode, cols) -> frozenset[int] | None:
    try:
        users = [phase_of(code, c)[0] for c in cols]
    except KeyError:
        return None
    if len(set(users)) != len(users):
        return None
    return frozenset(users)


def _report(code, mode, cols) -> ActivityReport | None:
    users = _distinct_users(code, cols)
    if users is None or len(cols) > code.num_users:
        return None
    if mode is AttackMode.SILENCE_CHEATING and not cols:
        mode = AttackMode.NO_ATTACKER
    return ActivityReport(mode, len(cols), frozenset(int(c) for c in cols), users)


def _exact(code: H2dfCode, counts: np.ndarray) -> set[int] | None:
    """Columns whose superposition reproduces ``counts`` exactly, if any."""
    if (counts < 0).any():
        return None
    try:
        cols = decompose(code, counts > 0, code.order)
    except (NotDecomposable, AmbiguousDecomposition):
        return None
    if not np.array_equal(column_counts(code, cols), counts):
        return None
    return cols


def _jamming_explanations(code: H2dfCode, counts: np.ndarray):
    """All user-consistent column sets S with ``counts - cover(S)`` in {0, 1}.

    Depth-first over columns lying inside the occupied support, pruning any
    branch that over-covers a subcarrier or reuses a user.
    """
    cand = [int(c) for c in covered_columns(code, counts > 0)]
    rows = code.rows
    owners = {}
    for c in cand:
        try:
            owners[c] = phase_of(code, c)[0]
        except KeyError:
            pass
    cand = [c for c in cand if c in owners]
    limit = code.num_users
    found = []

    def walk(start, chosen, residual, users):
        if (residual <= 1).all():
            found.append(tuple(chosen))
        if len(chosen) == limit:
            return
        for i in range(start, len(cand)):
            c = cand[i]
            if owners[c] in users:
                continue
            r = rows[c]
            if (residual[r] < 1).any():
                continue
            residual[r] -= 1
            chosen.append(c)
            users.add(owners[c])
            walk(i + 1, chosen, residual, users)
            users.discard(owners[c])
            chosen.pop()
            residual[r] += 1

    walk(0, [], counts.astype(np.int64).copy(), set())
    return found


def _partial_band(code: H2dfCode, counts: np.ndarray) -> ActivityReport:
    options = [s for s in _jamming_explanations(code, counts) if len(s) * code.inner_length < counts.sum()]
    if not options:
        raise UndecodableObservation("no ALU set leaves a 0/1 jamming residual")
    best = max(len(s) for s in options)
    top = [s for s in options if len(s) == best]
    if len(top) > 1:
        raise UndecodableObservation(f"{len(top)} equally good partial-band explanations")
    rep = _report(code, AttackMode.PARTIAL_BAND, top[0])
    if rep is None:
        raise UndecodableObservation("partial-band explanation violates user ownership")
    return rep


def detect_activity(occ: np.ndarray, code: H2dfCode) -> ActivityReport:
    """Identify attack mode, number of active users and their codewords from
    exact per-subcarrier signal counts.

    Follows the three branches of the hybrid-attack detector: an all-occupied
    band means wide-band jamming (remove one signal everywhere and decode);
    otherwise the occupied pattern is decoded and, if the decoded codewords
    account for every counted signal, the attacker was silent; otherwise the
    leftover single-signal subcarriers are attributed to partial-band jamming.
    For that last step the decoder keeps the user set that explains the most
    signals while leaving at most one jamming signal per subcarrier.
    """
    if code.clusters is None:
        raise ValueError("code needs a cluster assignment")
    n = np.asarray(occ, dtype=np.int64)
    if n.shape != (code.length,):
        raise LengthMismatch(f"occupancy has shape {n.shape}, expected ({code.length},)")
    if (n < 0).any():
        raise ValueError("occupancy counts must be non-negative")

    occupied = n > 0
    if not occupied.any():
        return ActivityReport(AttackMode.NO_ATTACKER, 0, frozenset(), frozenset())

    if occupied.all():
        cols = _exact(code, n - 1)
        if cols is not None:
            rep = _report(code, AttackMode.WIDE_BAND, cols)
            if rep is not None:
                return rep
    else:
        cols = _exact(code, n)
        if cols is not None:
            rep = _report(code, AttackMode.SILENCE_CHEATING, cols)
            if rep is not None:
                return rep
    return _partial_band(code, n)
