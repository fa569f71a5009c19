"""Superimposed (disjunct) pilot codes built from Reed-Solomon codes over GF(q).

A code of order ``t`` is the one-hot concatenation of an MDS code of length
``L = 1 + t(k-1)`` and dimension ``k``: every polynomial of degree < k over
GF(q) is evaluated at ``L`` points and each symbol is expanded to a q-bit
block with a single one. Two distinct columns then agree in at most ``k-1``
blocks, so no column is covered by the OR of ``t`` others.

When ``L == q + 1`` the last evaluation point is the point at infinity (the
leading coefficient), i.e. the doubly-extended RS code, which is still MDS.
This is what allows ``q >= t(k-1)`` rather than ``q >= L``.

Indices are 0-based throughout: columns, users and phase indices.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    AmbiguousDecomposition,
    FieldTooSmall,
    LengthMismatch,
    NonPrimeModulus,
    NotDecomposable,
    PhaseOutOfRange,
    TooManyUsers,
    UnassignedColumn,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FieldParams:
    q: int
    k: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise NonPrimeModulus(f"q={self.q} is not prime")
        if self.k < 2:
            raise ValueError(f"dimension k must be >= 2, got {self.k}")


@dataclass(frozen=True)
class PilotPhase:
    """Quantized pilot phase ``2*pi*index/C`` from an alphabet of size ``C``."""

    index: int
    size: int

    def __post_init__(self):
        if not 0 <= self.index < self.size:
            raise PhaseOutOfRange(f"phase index {self.index} outside [0, {self.size})")

    @property
    def value(self) -> float:
        return 2.0 * math.pi * self.index / self.size

    @classmethod
    def from_value(cls, phi: float, size: int) -> "PilotPhase":
        m = round((phi % (2.0 * math.pi)) * size / (2.0 * math.pi)) % size
        return cls(int(m), size)


@dataclass(frozen=True)
class Sap:
    """Subcarrier activation pattern: one code column owned by a user."""

    bits: np.ndarray
    owner: int
    phase_index: int
    column: int


@dataclass(frozen=True, eq=False)
class H2dfCode:
    params: FieldParams
    order: int
    inner_length: int
    length: int
    size: int
    symbols: np.ndarray = field(repr=False)
    clusters: tuple[np.ndarray, ...] | None = field(default=None, repr=False)

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def matrix(self) -> np.ndarray:
        """B x C binary matrix, one codeword per column."""
        m = np.zeros((self.length, self.size), dtype=np.uint8)
        m[self.rows, np.arange(self.size)[:, None]] = 1
        return m

    @property
    def rows(self) -> np.ndarray:
        """(C, L) row index of the one in each block of each column."""
        return self.symbols + self.q * np.arange(self.inner_length)

    def column(self, c: int) -> np.ndarray:
        bits = np.zeros(self.length, dtype=bool)
        bits[self.rows[c]] = True
        return bits

    @property
    def num_users(self) -> int:
        return 0 if self.clusters is None else len(self.clusters)

    @property
    def cluster_size(self) -> int:
        if not self.clusters:
            return 0
        return len(self.clusters[0])


def build_code(q: int, k: int, t: int) -> H2dfCode:
    params = FieldParams(q, k)
    if t < 2:
        raise ValueError(f"order t must be >= 2, got {t}")
    L = 1 + t * (k - 1)
    if L > q + 1:
        raise FieldTooSmall(
            f"q={q} too small for order {t}, dimension {k}: need q >= t(k-1) = {t * (k - 1)}"
        )
    coeffs = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)
    finite = np.arange(min(L, q), dtype=np.int64)
    # Vandermonde in ascending degree: coeffs[:, i] multiplies x**i
    powers = np.ones((k, finite.size), dtype=np.int64)
    for i in range(1, k):
        powers[i] = (powers[i - 1] * finite) % q
    symbols = (coeffs @ powers) % q
    if L == q + 1:
        symbols = np.hstack([symbols, coeffs[:, k - 1 : k]])
    return H2dfCode(
        params=params,
        order=t,
        inner_length=L,
        length=q * L,
        size=q**k,
        symbols=_frozen(symbols.astype(np.int64)),
    )


def assign_clusters(code: H2dfCode, num_users: int) -> H2dfCode:
    """Split columns into ``num_users`` contiguous clusters of ``C // num_users``."""
    if num_users < 1:
        raise ValueError("num_users must be >= 1")
    per = code.size // num_users
    if per < 1:
        raise TooManyUsers(f"{num_users} users but only {code.size} columns")
    clusters = tuple(
        _frozen(np.arange(u * per, (u + 1) * per, dtype=np.int64)) for u in range(num_users)
    )
    return replace(code, clusters=clusters)


def _check_user(code: H2dfCode, user: int) -> None:
    if code.clusters is None:
        raise UnassignedColumn("code has no cluster assignment")
    if not 0 <= user < len(code.clusters):
        raise IndexError(f"user {user} outside [0, {len(code.clusters)})")


def encode_pilot(code: H2dfCode, user: int, phase: int | PilotPhase) -> Sap:
    _check_user(code, user)
    idx = phase.index if isinstance(phase, PilotPhase) else int(phase)
    cluster = code.clusters[user]
    if not 0 <= idx < len(cluster):
        raise PhaseOutOfRange(f"phase index {idx} outside [0, {len(cluster)})")
    col = int(cluster[idx])
    return Sap(bits=code.column(col), owner=user, phase_index=idx, column=col)


def phase_of(code: H2dfCode, column: int) -> tuple[int, int]:
    """Inverse of :func:`encode_pilot`: column index -> (user, phase index)."""
    if code.clusters is None or not 0 <= column < code.size:
        raise UnassignedColumn(column)
    per = code.cluster_size
    user, idx = divmod(column, per)
    if user >= code.num_users:
        raise UnassignedColumn(column)
    return user, idx


def boolean_sum(saps: Sequence[np.ndarray], length: int | None = None) -> np.ndarray:
    """Bitwise OR of binary vectors. ``length`` sizes the empty sum."""
    vecs = [np.asarray(getattr(s, "bits", s), dtype=bool) for s in saps]
    if not vecs:
        if length is None:
            raise LengthMismatch("empty sum needs an explicit length")
        return np.zeros(length, dtype=bool)
    n = vecs[0].size
    if any(v.shape != (n,) for v in vecs) or (length is not None and n != length):
        raise LengthMismatch("all vectors must share one length")
    return np.logical_or.reduce(vecs)


def covered_columns(code: H2dfCode, observed: np.ndarray) -> np.ndarray:
    """Indices of all columns whose support lies inside ``observed``."""
    obs = np.ascontiguousarray(observed, dtype=np.bool_)
    if obs.shape != (code.length,):
        raise LengthMismatch(f"observed has shape {obs.shape}, expected ({code.length},)")
    return np.flatnonzero(kernels.cover_mask(code.symbols, obs, code.q))


def column_counts(code: H2dfCode, cols: Iterable[int]) -> np.ndarray:
    """Per-row multiplicity of the superposition of ``cols``."""
    cols = np.ascontiguousarray(sorted(cols), dtype=np.int64)
    return kernels.cover_counts(code.symbols, cols, code.q, code.length)


def decompose(code: H2dfCode, observed: np.ndarray, max_order: int | None = None) -> set[int]:
    """Recover the set of columns whose Boolean sum is ``observed``.

    The answer is the set of all columns covered by ``observed``; for an OR of
    at most ``order`` columns, disjunctness makes this exactly the summands.
    """
    if max_order is None:
        max_order = code.order
    if max_order > code.order:
        raise ValueError(f"max_order {max_order} exceeds code order {code.order}")
    obs = np.asarray(observed, dtype=bool)
    cover = covered_columns(code, obs)
    if not np.array_equal(column_counts(code, cover) > 0, obs):
        raise NotDecomposable("observed pattern is not a Boolean sum of codewords")
    if cover.size > max_order:
        raise AmbiguousDecomposition(
            f"{cover.size} covered columns exceed max order {max_order}"
        )
    return {int(c) for c in cover}


# ---------------------------------------------------------------------------
# property checks (used by tests and ``code-check``)


def check_weights(code: H2dfCode) -> bool:
    m = code.matrix.reshape(code.inner_length, code.q, code.size)
    return bool((m.sum(axis=1) == 1).all())


def max_block_agreement(code: H2dfCode) -> int:
    """Largest number of blocks in which two distinct columns coincide."""
    s = code.symbols
    worst = 0
    for c in range(code.size - 1):
        agree = (s[c + 1 :] == s[c]).sum(axis=1)
        if agree.size:
            worst = max(worst, int(agree.max()))
    return worst


def _combos(n: int, r: int, batch: int = 4096):
    it = itertools.combinations(range(n), r)
    while True:
        chunk = list(itertools.islice(it, batch))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64)


def disjunct_violations(code: H2dfCode, t: int | None = None) -> int:
    """Exhaustively count (set, column) pairs where a column outside a set of
    ``t`` columns is covered by the set's OR. Zero means t-disjunct.

    Only sets of size exactly ``t`` are enumerated; smaller sets are subsets
    of these, so their coverage is implied.
    """
    t = code.order if t is None else t
    t = min(t, code.size - 1)
    return sum(
        kernels.count_covered_outside(code.symbols, code.q, combos)
        for combos in _combos(code.size, t)
    )


def random_disjunct_violations(code: H2dfCode, trials: int, rng, t: int | None = None) -> int:
    t = code.order if t is None else t
    t = min(t, code.size - 1)
    combos = np.array([rng.choice(code.size, t, replace=False) for _ in range(trials)], dtype=np.int64)
    return kernels.count_covered_outside(code.symbols, code.q, combos)


def all_sums_distinct(code: H2dfCode, t: int | None = None) -> bool:
    """Every OR of <= t distinct columns differs from every other such OR."""
    t = code.order if t is None else t
    seen = set()
    count = 0
    for r in range(t + 1):
        for combo in itertools.combinations(range(code.size), r):
            key = np.packbits(column_counts(code, combo) > 0).tobytes()
            seen.add(key)
            count += 1
    return len(seen) == count


def export_text(code: H2dfCode) -> str:
    m = code.matrix
    lines = [f"{code.q} {code.k} {code.order} {code.length} {code.size}"]
    lines += ["".join("1" if b else "0" for b in row) for row in m]
    return "\n".join(lines) + "\n"
