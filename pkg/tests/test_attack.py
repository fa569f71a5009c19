import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gfaccess.attack import AttackerConfig, AttackMode, apply_attack_counts, attacker_pilot_signal
from gfaccess.errors import IndexOutOfRange, NotJammed

OCC = np.array([1, 0, 2])


@pytest.mark.parametrize(
    "cfg,expected",
    [
        (AttackerConfig(AttackMode.SILENCE_CHEATING), [1, 0, 2]),
        (AttackerConfig(AttackMode.WIDE_BAND), [2, 1, 3]),
        (AttackerConfig(AttackMode.PARTIAL_BAND, jammed={1}), [1, 1, 2]),
        (AttackerConfig(), [1, 0, 2]),
    ],
)
def test_apply_attack_counts(cfg, expected):
    assert apply_attack_counts(OCC, cfg).tolist() == expected


def test_footprint_out_of_range():
    with pytest.raises(IndexOutOfRange):
        AttackerConfig(AttackMode.PARTIAL_BAND, jammed={5}).footprint(3)


def test_partial_band_needs_set():
    with pytest.raises(ValueError):
        AttackerConfig(AttackMode.PARTIAL_BAND)


@pytest.mark.parametrize("text,mode", [("none", AttackMode.NO_ATTACKER), ("SC", AttackMode.SILENCE_CHEATING),
                                       ("wb", AttackMode.WIDE_BAND), ("pb_pj", AttackMode.PARTIAL_BAND)])
def test_mode_parse(text, mode):
    assert AttackMode.parse(text) is mode


@pytest.mark.parametrize(
    "power,phi,expected",
    [(0.0, 0.0, 0j), (4.0, 0.0, 2 + 0j), (1.0, math.pi / 2, 1j)],
)
def test_attacker_pilot_signal(power, phi, expected):
    cfg = AttackerConfig(AttackMode.WIDE_BAND, power, phases={(0, 0): phi})
    assert attacker_pilot_signal(cfg, 0, 0, num_subcarriers=4) == pytest.approx(expected, abs=1e-15)


def test_attacker_random_phase_has_power(rng):
    cfg = AttackerConfig(AttackMode.PARTIAL_BAND, 9.0, jammed={2})
    x = attacker_pilot_signal(cfg, 2, 0, rng, 4)
    assert abs(x) == pytest.approx(3.0)


@pytest.mark.parametrize("cfg", [AttackerConfig(AttackMode.SILENCE_CHEATING), AttackerConfig(AttackMode.PARTIAL_BAND, jammed={1})])
def test_not_jammed(cfg):
    with pytest.raises(NotJammed):
        attacker_pilot_signal(cfg, 0, 0, num_subcarriers=3)


counts = st.lists(st.integers(0, 6), min_size=1, max_size=30).map(np.array)


@given(counts, st.sampled_from(list(AttackMode)), st.data())
def test_attack_never_decreases(occ, mode, data):
    jam = set()
    if mode is AttackMode.PARTIAL_BAND:
        jam = data.draw(st.sets(st.integers(0, occ.size - 1), min_size=1))
    out = apply_attack_counts(occ, AttackerConfig(mode, jammed=jam))
    assert (out >= occ).all() and (out - occ <= 1).all()


@given(counts)
def test_no_attacker_identity(occ):
    assert np.array_equal(apply_attack_counts(occ, AttackerConfig()), occ)


@given(counts)
def test_wide_band_positive(occ):
    occ = occ.copy()
    occ[0] = max(occ[0], 1)
    assert (apply_attack_counts(occ, AttackerConfig(AttackMode.WIDE_BAND)) > 0).all()
