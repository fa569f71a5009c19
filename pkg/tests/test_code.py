import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gfaccess import code as cc
from gfaccess.errors import (
    AmbiguousDecomposition,
    FieldTooSmall,
    LengthMismatch,
    NonPrimeModulus,
    NotDecomposable,
    PhaseOutOfRange,
    TooManyUsers,
    UnassignedColumn,
)


def brute_or(matrix, cols):
    # reference OR taken straight from the explicit binary matrix
    out = np.zeros(matrix.shape[0], dtype=bool)
    for c in cols:
        out |= matrix[:, c].astype(bool)
    return out


def brute_decompose(matrix, observed, t):
    hits = [
        set(s)
        for r in range(t + 1)
        for s in itertools.combinations(range(matrix.shape[1]), r)
        if np.array_equal(brute_or(matrix, s), observed)
    ]
    return hits


@pytest.mark.parametrize("n,expected", [(2, True), (3, True), (4, False), (9, False), (97, True), (1, False)])
def test_is_prime(n, expected):
    assert cc.is_prime(n) is expected


def test_field_params_reject_composite():
    with pytest.raises(NonPrimeModulus):
        cc.FieldParams(4, 2)


def test_build_323_shape(code323):
    assert (code323.length, code323.size, code323.inner_length) == (12, 9, 4)
    assert code323.matrix.shape == (12, 9)


def test_build_532_shape():
    code = cc.build_code(5, 3, 2)
    assert (code.length, code.size) == (25, 125)
    assert cc.disjunct_violations(code) == 0


def test_field_too_small():
    with pytest.raises(FieldTooSmall):
        cc.build_code(2, 2, 3)


@pytest.mark.parametrize("q,k,t", [(3, 2, 3), (5, 2, 5), (5, 3, 2), (7, 2, 4), (7, 3, 3)])
def test_weights_and_agreement(q, k, t):
    code = cc.build_code(q, k, t)
    assert cc.check_weights(code)
    assert (code.matrix.sum(axis=0) == code.inner_length).all()
    assert cc.max_block_agreement(code) <= k - 1


def test_block_agreement_bruteforce(code323):
    m = code323.matrix.astype(int)
    # two columns share a block symbol exactly where both have a one
    overlaps = m.T @ m
    np.fill_diagonal(overlaps, 0)
    assert overlaps.max() == cc.max_block_agreement(code323)


def test_323_exhaustive_decomposition(code323):
    m = code323.matrix
    for r in range(4):
        for s in itertools.combinations(range(9), r):
            obs = brute_or(m, s)
            assert cc.decompose(code323, obs) == set(s)
            assert brute_decompose(m, obs, 3) == [set(s)]


def test_323_sums_distinct(code323):
    assert cc.all_sums_distinct(code323)
    assert cc.disjunct_violations(code323) == 0


def test_disjunct_check_detects_overload(code323):
    # order t + 1 sets must eventually cover an outside column for this small code
    assert cc.disjunct_violations(code323, t=5) > 0


def test_randomized_disjunctness(rng):
    code = cc.build_code(7, 3, 3)
    assert cc.random_disjunct_violations(code, 2000, rng) == 0


@pytest.mark.parametrize("users,sizes,leftover", [(3, [3, 3, 3], 0), (2, [4, 4], 1)])
def test_cluster_sizes(code323, users, sizes, leftover):
    c = cc.assign_clusters(code323, users)
    assert [len(x) for x in c.clusters] == sizes
    assigned = set(np.concatenate(c.clusters).tolist())
    assert 9 - len(assigned) == leftover


def test_too_many_users(code323):
    with pytest.raises(TooManyUsers):
        cc.assign_clusters(code323, 10)


def test_encode_pilot_first_column(code323_g3):
    sap = cc.encode_pilot(code323_g3, 1, 0)
    assert sap.column == code323_g3.clusters[1][0] == 3
    assert np.array_equal(sap.bits, code323_g3.matrix[:, 3].astype(bool))
    assert cc.phase_of(code323_g3, sap.column) == (1, 0)


def test_encode_pilot_phase_out_of_range(code323_g3):
    with pytest.raises(PhaseOutOfRange):
        cc.encode_pilot(code323_g3, 1, code323_g3.cluster_size)


def test_phase_of_partition_order(code323_g3):
    assert cc.phase_of(code323_g3, 3) == (1, 0)
    assert cc.phase_of(code323_g3, 4) == (1, 1)
    assert cc.phase_of(code323_g3, 8) == (2, 2)


def test_phase_of_unassigned(code323):
    c = cc.assign_clusters(code323, 2)
    with pytest.raises(UnassignedColumn):
        cc.phase_of(c, 8)


def test_encode_phase_of_bijection(code525_g4):
    seen = set()
    for u in range(code525_g4.num_users):
        for p in range(code525_g4.cluster_size):
            col = cc.encode_pilot(code525_g4, u, p).column
            assert cc.phase_of(code525_g4, col) == (u, p)
            seen.add(col)
    assert len(seen) == code525_g4.num_users * code525_g4.cluster_size


def test_pilot_phase_value_roundtrip():
    ph = cc.PilotPhase(3, 8)
    assert ph.value == pytest.approx(2 * np.pi * 3 / 8)
    assert cc.PilotPhase.from_value(ph.value, 8) == ph


def test_boolean_sum_examples(code323):
    m = code323.matrix.astype(bool)
    assert not cc.boolean_sum([], length=12).any()
    assert np.array_equal(cc.boolean_sum([m[:, 1]]), m[:, 1])
    expected = np.maximum(m[:, 1].astype(int), m[:, 6].astype(int)).astype(bool)
    assert np.array_equal(cc.boolean_sum([m[:, 1], m[:, 6]]), expected)


def test_boolean_sum_length_mismatch():
    with pytest.raises(LengthMismatch):
        cc.boolean_sum([np.ones(3, bool), np.ones(4, bool)])
    with pytest.raises(LengthMismatch):
        cc.boolean_sum([])


def test_decompose_examples(code323):
    m = code323.matrix.astype(bool)
    assert cc.decompose(code323, m[:, 5]) == {5}
    assert cc.decompose(code323, m[:, 2] | m[:, 7]) == {2, 7}
    assert cc.decompose(code323, np.zeros(12, bool)) == set()


def test_decompose_errors(code323):
    m = code323.matrix.astype(bool)
    odd = np.zeros(12, bool)
    odd[0] = True
    with pytest.raises(NotDecomposable):
        cc.decompose(code323, odd)
    with pytest.raises(AmbiguousDecomposition):
        cc.decompose(code323, m[:, 0] | m[:, 4] | m[:, 8], max_order=2)


def test_export_text_format(code323_g3):
    text = cc.export_text(code323_g3)
    lines = text.splitlines()
    assert lines[0] == "3 2 3 12 9"
    assert len(lines) == 13 and all(len(x) == 9 and set(x) <= {"0", "1"} for x in lines[1:])
    assert text == cc.export_text(cc.assign_clusters(cc.build_code(3, 2, 3), 3))


codes = {(5, 2, 5): cc.build_code(5, 2, 5), (7, 3, 3): cc.build_code(7, 3, 3)}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(codes)), st.data())
def test_decompose_roundtrip_random(key, data):
    code = codes[key]
    cols = data.draw(st.sets(st.integers(0, code.size - 1), max_size=code.order))
    obs = brute_or(code.matrix, cols)
    assert cc.decompose(code, obs) == cols
