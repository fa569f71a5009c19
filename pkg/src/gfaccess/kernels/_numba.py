"""numba versions of the kernels in ``_numpy``; same signatures and results."""
import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def cover_mask(symbols, observed, q):
    C, L = symbols.shape
    out = np.ones(C, dtype=np.bool_)
    for c in range(C):
        for l in range(L):
            if not observed[l * q + symbols[c, l]]:
                out[c] = False
                break
    return out


@njit(cache=True, nogil=True)
def cover_counts(symbols, cols, q, B):
    L = symbols.shape[1]
    out = np.zeros(B, dtype=np.int64)
    for c in cols:
        for l in range(L):
            out[l * q + symbols[c, l]] += 1
    return out


@njit(cache=True, nogil=True)
def count_covered_outside(symbols, q, combos):
    C, L = symbols.shape
    B = q * L
    total = 0
    fp = np.zeros(B, dtype=np.bool_)
    for r in range(combos.shape[0]):
        fp[:] = False
        for s in range(combos.shape[1]):
            c = combos[r, s]
            for l in range(L):
                fp[l * q + symbols[c, l]] = True
        for c in range(C):
            member = False
            for s in range(combos.shape[1]):
                if combos[r, s] == c:
                    member = True
                    break
            if member:
                continue
            covered = True
            for l in range(L):
                if not fp[l * q + symbols[c, l]]:
                    covered = False
                    break
            if covered:
                total += 1
    return total


@njit(cache=True, nogil=True)
def log_sum_terms(log_gamma1, coeffs, base):
    n = log_gamma1.size
    m_terms = coeffs.size
    out = np.empty(n)
    for j in range(n):
        mx = -np.inf
        for i in range(m_terms):
            a = coeffs[i] - (base + i) * log_gamma1[j]
            if a > mx:
                mx = a
        acc = 0.0
        for i in range(m_terms):
            acc += math.exp(coeffs[i] - (base + i) * log_gamma1[j] - mx)
        out[j] = mx + math.log(acc)
    return out


@njit(cache=True, nogil=True)
def mf_power_terms(g_hat, g_other, err, gamma):
    T, N = g_hat.shape
    Kc = g_other.shape[1]
    signal = np.empty(T)
    interference = np.empty(T)
    error = np.empty(T)
    noise = np.empty(T)
    for t in range(T):
        nrm = 0.0
        for n in range(N):
            v = g_hat[t, n]
            nrm += v.real * v.real + v.imag * v.imag
        acc = 0.0
        for m in range(Kc):
            s = 0j
            for n in range(N):
                s += g_hat[t, n].conjugate() * g_other[t, m, n]
            acc += s.real * s.real + s.imag * s.imag
        e = 0j
        for n in range(N):
            e += g_hat[t, n].conjugate() * err[t, n]
        signal[t] = gamma * nrm * nrm
        interference[t] = gamma * acc
        error[t] = gamma * (e.real * e.real + e.imag * e.imag)
        noise[t] = nrm
    return signal, interference, error, noise
