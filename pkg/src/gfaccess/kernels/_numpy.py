"""Pure-numpy reference implementations of the hot kernels."""
import numpy as np


def cover_mask(symbols, observed, q):
    """Columns whose support lies inside ``observed``.

    ``symbols[c, l]`` is the symbol of column ``c`` in block ``l``; the
    column has a one at row ``l * q + symbols[c, l]``.
    """
    L = symbols.shape[1]
    rows = symbols + q * np.arange(L)
    return observed[rows].all(axis=1)


def cover_counts(symbols, cols, q, B):
    """Per-row number of columns in ``cols`` having a one there."""
    L = symbols.shape[1]
    rows = (symbols[cols] + q * np.arange(L)).ravel()
    return np.bincount(rows, minlength=B).astype(np.int64)


def count_covered_outside(symbols, q, combos):
    """Number of (combo, column) pairs with the column outside the combo
    yet covered by the OR of the combo's columns."""
    C, L = symbols.shape
    B = q * L
    offsets = q * np.arange(L)
    rows = symbols + offsets
    total = 0
    for combo in combos:
        fp = np.zeros(B, dtype=bool)
        fp[rows[combo].ravel()] = True
        hit = fp[rows].all(axis=1)
        hit[combo] = False
        total += int(hit.sum())
    return total


def log_sum_terms(log_gamma1, coeffs, base):
    """``log sum_i exp(coeffs[i] - (base + i) * log_gamma1[n])`` for each n.

    ``log_gamma1`` holds ``log(1 + gamma)`` per node.
    """
    i = np.arange(coeffs.size)
    a = coeffs[None, :] - (base + i)[None, :] * log_gamma1[:, None]
    m = a.max(axis=1)
    return m + np.log(np.exp(a - m[:, None]).sum(axis=1))


def mf_power_terms(g_hat, g_other, err, gamma):
    """Matched-filter power terms per trial.

    Returns (signal, interference, estimation-error, noise) powers where the
    filter is ``g_hat`` (T, N), interferer channels are ``g_other`` (T, Kc, N)
    and ``err`` (T, N) is the true-minus-estimated channel of the desired user.
    """
    norm2 = np.einsum("tn,tn->t", g_hat.conj(), g_hat).real
    signal = gamma * norm2**2
    if g_other.shape[1]:
        cross = np.einsum("tn,tmn->tm", g_hat.conj(), g_other)
        interference = gamma * (np.abs(cross) ** 2).sum(axis=1)
    else:
        interference = np.zeros_like(norm2)
    error = gamma * np.abs(np.einsum("tn,tn->t", g_hat.conj(), err)) ** 2
    return signal, interference, error, norm2
