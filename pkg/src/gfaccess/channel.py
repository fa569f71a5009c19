"""Frequency-selective Rayleigh SIMO-OFDM link and matched-filter SINR Monte-Carlo."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BadProfile, DimensionMismatch, LambdaOutOfRange
from .rng import chunk_streams


def crandn(rng, *shape) -> np.ndarray:
    """Standard circular complex Gaussian samples, E|x|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(0.5)


def uniform_profile(taps: int = 6) -> np.ndarray:
    return np.full(taps, 1.0 / taps)


def _check_profile(profile) -> np.ndarray:
    p = np.asarray(profile, dtype=float)
    if p.ndim != 1 or p.size < 1 or (p < 0).any() or not np.isclose(p.sum(), 1.0, atol=1e-12):
        raise BadProfile(f"tap power profile must be non-negative and sum to 1, got {p}")
    return p


@dataclass(frozen=True, eq=False)
class Cir:
    taps: np.ndarray  # (N_T, L)
    profile: np.ndarray

    @property
    def num_antennas(self) -> int:
        return self.taps.shape[0]


@dataclass(frozen=True, eq=False)
class EstimatedChannel:
    g_hat: np.ndarray
    error_weight: float


def draw_cir(taps: int, n_t: int, profile=None, rng=None) -> Cir:
    profile = uniform_profile(taps) if profile is None else _check_profile(profile)
    if profile.size != taps:
        raise BadProfile(f"profile has {profile.size} entries for {taps} taps")
    rng = np.random.default_rng() if rng is None else rng
    h = crandn(rng, n_t, taps) * np.sqrt(profile)
    return Cir(h, profile)


def dft_rows(j, taps: int, n_e: int) -> np.ndarray:
    """Rows ``j`` of ``F_L = sqrt(N_E) * F[:, :L]`` for the unitary DFT F."""
    j = np.asarray(j)
    return np.exp(-2j * np.pi * np.multiply.outer(j, np.arange(taps)) / n_e)


def to_subcarrier(cir: Cir, j: int, n_e: int) -> np.ndarray:
    """Channel vector across antennas on subcarrier ``j``."""
    if not 0 <= j < n_e:
        raise IndexError(f"subcarrier {j} outside [0, {n_e})")
    return cir.taps @ dft_rows(j, cir.taps.shape[1], n_e)


def rx_data(channels, symbols, rng=None, noise: bool = True) -> np.ndarray:
    """``y = sum_m g_m d_m + w`` with unit-variance circular noise.

    ``channels`` is (K, N_T) and ``symbols`` (K,) or (K, S) for S symbol times.
    """
    g = np.atleast_2d(np.asarray(channels, dtype=complex))
    d = np.atleast_1d(np.asarray(symbols, dtype=complex))
    if d.shape[0] != g.shape[0]:
        raise DimensionMismatch(f"{g.shape[0]} channels vs {d.shape[0]} symbol streams")
    y = np.tensordot(d, g, axes=([0], [0]))
    if noise:
        rng = np.random.default_rng() if rng is None else rng
        y = y + crandn(rng, *y.shape)
    return y


def estimate_with_error(g: np.ndarray, lam: float, rng=None) -> EstimatedChannel:
    """Imperfect estimate ``(1 - lam) g - sqrt(lam (1 - lam)) g_tilde``.

    The error ``g - g_hat`` is uncorrelated with ``g_hat`` (LMMSE structure),
    with ``E|g_hat_i|^2 = 1 - lam`` and error variance ``lam`` per antenna.
    """
    if not 0 <= lam < 1:
        raise LambdaOutOfRange(f"lambda must satisfy 0 <= lambda < 1, got {lam}")
    g = np.asarray(g)
    if lam == 0:
        return EstimatedChannel(g.copy(), 0.0)
    rng = np.random.default_rng() if rng is None else rng
    g_hat = (1 - lam) * g - np.sqrt(lam * (1 - lam)) * crandn(rng, *g.shape)
    return EstimatedChannel(g_hat, float(lam))


def rx_pilot(
    g_users: np.ndarray,
    x_users: np.ndarray,
    noise_power: float,
    rng,
    g_attacker: np.ndarray | None = None,
    x_attacker: np.ndarray | None = None,
) -> np.ndarray:
    """Frequency-domain pilot observation on one subcarrier.

    ``g_users`` (M, N_T), ``x_users`` (M, S) pilot tones over S symbols.
    Returns the (S, N_T) matrix ``sum_m x_m g_m^T + x_A g_A^T + noise``.
    """
    g_users = np.asarray(g_users).reshape(-1, np.shape(g_users)[-1])
    n_t = g_users.shape[1]
    x_users = np.asarray(x_users).reshape(g_users.shape[0], -1)
    y = x_users.T @ g_users
    if g_attacker is not None:
        y = y + np.outer(x_attacker, g_attacker)
    return y + np.sqrt(noise_power) * crandn(rng, y.shape[0], n_t)


def circulant_pilot_rx(cir_taps: np.ndarray, x: np.ndarray, n_e: int) -> np.ndarray:
    """Time-domain reference path: circulant channel on the IFFT of ``x``,
    then FFT. Used only to validate the frequency-domain model."""
    from scipy.linalg import circulant

    col = np.zeros(n_e, dtype=complex)
    col[: cir_taps.size] = cir_taps
    Hc = circulant(col)
    F = np.fft.fft(np.eye(n_e), norm="ortho")
    return F @ (Hc @ (F.conj().T @ x))


@dataclass(frozen=True)
class SinrEstimate:
    mean_sinr: float  # includes the +1 offset used by the asymptotic formulas
    samples: np.ndarray  # instantaneous post-filter SINR per trial (no offset)
    signal: float
    interference: float
    error: float
    noise: float


def matched_filter_sinr(
    users: int,
    n_t: int,
    gamma: float,
    lam: float,
    trials: int,
    seed=0,
    *,
    taps: int = 6,
    n_e: int = 512,
    profile=None,
    chunk: int = 1000,
) -> SinrEstimate:
    """Monte-Carlo post-matched-filter SINR for user 0 among ``users``.

    Per trial, channels come from independent CIRs mapped to a random
    subcarrier; the filter is the (possibly erroneous) estimate of user 0.
    The filter output splits into signal ``g_hat^H g_hat d_0``, inter-user
    interference, estimation-error leakage ``g_hat^H (g - g_hat) d_0`` and
    noise. Powers are accumulated over trials and the ratio of the totals
    (plus one) is returned; per-trial ratios are kept in ``samples``.
    ``seed`` is an int or a sequence of ints (a stream key).
    """
    if users < 1:
        raise ValueError("need at least one user")
    profile = uniform_profile(taps) if profile is None else _check_profile(profile)
    totals = np.zeros(4)
    samples = np.empty(trials)
    done = 0
    for rng, n in chunk_streams(seed, trials, chunk):
        h = crandn(rng, n, users, n_t, taps) * np.sqrt(profile)
        j = rng.integers(0, n_e, size=n)
        f = dft_rows(j, taps, n_e)  # (n, L)
        g = np.einsum("tmal,tl->tma", h, f)
        g0 = g[:, 0]
        if lam == 0:
            g_hat = g0
        else:
            g_hat = estimate_with_error(g0, lam, rng).g_hat
        err = np.ascontiguousarray(g0 - g_hat)
        s, i, e, w = kernels.mf_power_terms(
            np.ascontiguousarray(g_hat), np.ascontiguousarray(g[:, 1:]), err, float(gamma)
        )
        totals += [s.sum(), i.sum(), e.sum(), w.sum()]
        samples[done : done + n] = s / (i + e + w)
        done += n
    sig, inter, err, noise = totals
    return SinrEstimate(1.0 + sig / (inter + err + noise), samples, sig, inter, err, noise)
