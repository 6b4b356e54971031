"""
Tests for the tampering families: bitwise actions, sampling, budgets,
serialisation, the family-size threshold and the q-ary add/overwrite family.
"""

import numpy as np
import pytest

from nmcode.errors import BudgetError, DimensionError
from nmcode.field_linalg import GF2, FieldVector, get_field
from nmcode.tamper import (
    ADD,
    OVERWRITE,
    STRATEGIES,
    STRUCTURED,
    UNIFORM,
    BitAction,
    QaryAction,
    ao_apply,
    ao_constant,
    ao_difference,
    ao_from_bit,
    ao_identity,
    ao_sample,
    budget,
    check_budget,
    constant_function,
    difference_function,
    distinguisher_set,
    family_loglog,
    family_size_threshold,
    identity_function,
    make_tamper,
    overwrite_function,
    privacy_breaker,
    tamper_apply,
    tamper_from_text,
    tamper_sample,
)

K, F, S0, S1 = int(BitAction.KEEP), int(BitAction.FLIP), int(BitAction.SET0), int(BitAction.SET1)


def test_actions_on_a_word():
    """Set0, Set1, Keep, Flip on 1111."""
    f = constant_function(4, [S0, S1, K, F])
    assert tamper_apply(f, FieldVector.from_bits('1111')).to_text() == '0110'
    assert tamper_apply(f, FieldVector.from_bits('0000')).to_text() == '0101'


def test_read_dependent_actions():
    """Read position 0; α = 1 flips position 2, α = 0 keeps it."""
    f = make_tamper(3, [0], [2], {1: [F]})
    assert tamper_apply(f, FieldVector.from_bits('101')).to_text() == '100'
    assert tamper_apply(f, FieldVector.from_bits('001')).to_text() == '001'


def test_empty_read_set_acts_on_every_word():
    """No reads: the single table row applies to each word of a batch."""
    f = make_tamper(4, (), (0,), [[F]])
    assert f.reads == 0
    words = np.array([[0, 1, 1, 0], [1, 0, 0, 1], [1, 1, 1, 1]])
    out = f.apply_batch(words)
    assert out.tolist() == [[1, 1, 1, 0], [0, 0, 0, 1], [0, 1, 1, 1]]
    assert tamper_apply(f, FieldVector.from_bits('0000')).to_text() == '1000'
    assert f.actions_for_reads(np.zeros((3, 0), dtype=np.int64)).shape == (3, 1)


def test_empty_read_set_rule():
    f = make_tamper(4, (), (1, 2), lambda r: np.full((r.shape[0], 2), S1), name='set1')
    out = f.apply_batch(np.zeros((5, 4), dtype=np.int64))
    assert out.tolist() == [[0, 1, 1, 0]] * 5


def test_read_width_mismatch():
    f = make_tamper(3, [0], [2], {1: [F]})
    with pytest.raises(DimensionError):
        f.actions_for_reads(np.zeros((2, 2), dtype=np.int64))


def test_difference_function_swaps_families():
    f = constant_function(4, [S0, S1, K, F])
    assert difference_function(f, 0) == (BitAction.KEEP, BitAction.FLIP, BitAction.SET0, BitAction.SET1)


def test_difference_reproduces_tampering():
    """g^α(x) = x ⊕ Δg^α(x) for every x."""
    f = constant_function(4, [S0, S1, K, F])
    delta = constant_function(4, [int(a) for a in difference_function(f, 0)])
    for value in range(16):
        x = FieldVector.from_bits(format(value, '04b'))
        assert tamper_apply(f, x) == x + tamper_apply(delta, x)


def test_identity_and_overwrite():
    x = FieldVector.from_bits('1011')
    assert tamper_apply(identity_function(4), x) == x
    target = FieldVector.from_bits('0110')
    assert tamper_apply(overwrite_function(target), x) == target


def test_budget_floor():
    assert budget(31, 5 / 31) == 5
    assert budget(16, 0.25) == 4
    with pytest.raises(DimensionError):
        budget(8, 1.5)


def test_sample_respects_budgets():
    for seed in range(5):
        f = tamper_sample(16, 0.25, 0.5, mode=UNIFORM, seed=seed)
        assert f.reads == 4 and f.writes == 8
        check_budget(f, 0.25, 0.5)
        with pytest.raises(BudgetError):
            check_budget(f, 0.125, 0.5)


def test_sample_is_a_pure_function_of_seed():
    a = tamper_sample(16, 0.25, 0.5, mode=STRUCTURED, seed=9)
    b = tamper_sample(16, 0.25, 0.5, mode=STRUCTURED, seed=9)
    assert a.digest() == b.digest()


@pytest.mark.parametrize('strategy', STRATEGIES)
def test_structured_strategies(strategy):
    f = tamper_sample(12, 0.25, 0.5, mode=STRUCTURED, seed=2, strategy=strategy)
    words = np.random.default_rng(0).integers(0, 2, size=(20, 12))
    out = f.apply_batch(words)
    outside = [i for i in range(12) if i not in f.write_set]
    assert np.array_equal(out[:, outside], words[:, outside])


@pytest.mark.parametrize('mode', [UNIFORM, STRUCTURED])
def test_sample_with_no_reads(mode):
    """ρr = 0 draws a read-nothing function that still tampers whole batches."""
    f = tamper_sample(16, 0, 0.5, mode=mode, seed=5)
    assert f.reads == 0 and f.writes == 8
    words = np.random.default_rng(2).integers(0, 2, size=(10, 16))
    out = f.apply_batch(words)
    assert out.shape == (10, 16)
    outside = [i for i in range(16) if i not in f.write_set]
    assert np.array_equal(out[:, outside], words[:, outside])


def test_large_read_set_uses_a_rule():
    f = tamper_sample(96, 0.25, 0.25, mode=UNIFORM, seed=4)
    assert f.reads == 24 and f.table is None
    words = np.random.default_rng(1).integers(0, 2, size=(3, 96))
    assert np.array_equal(f.apply_batch(words), f.apply_batch(words))


def test_text_roundtrip():
    f = tamper_sample(8, 0.25, 0.5, mode=UNIFORM, seed=3)
    again = tamper_from_text(f.to_text())
    assert again.read_set == f.read_set and again.write_set == f.write_set
    assert np.array_equal(again.table, f.table)
    assert again.digest() == f.digest()


def test_write_set_out_of_range():
    with pytest.raises(DimensionError):
        make_tamper(4, [0], [3, 5], {})


def test_family_size_threshold_grid():
    """loglog|F| <= n(ρr + 0.1) from n = 128 on, for ρr in {1/8, 1/4} and ρw = 1."""
    grid = [16, 32, 64, 128]
    for rho_r in (1 / 8, 1 / 4):
        assert family_size_threshold(rho_r, 1, 0.1, grid) == 128
        assert family_loglog(128, rho_r, 1) <= 128 * (rho_r + 0.1)


def test_privacy_breaker_keeps_on_distinguisher():
    f = privacy_breaker([1], [0], n=1)
    assert tamper_apply(f, FieldVector.from_bits('1')).to_text() == '1'
    assert tamper_apply(f, FieldVector.from_bits('0')).to_text() == '1'


def test_distinguisher_set():
    assert distinguisher_set([0, 4], [4, 0]) == [1]
    assert distinguisher_set([2, 2], [2, 2]) == []


def test_ao_actions():
    """Add(Δ) gives x + Δ, Overwrite(c) gives c."""
    gf16 = get_field(4)
    f = ao_constant(gf16, [QaryAction.add(3), QaryAction.overwrite(9), QaryAction.add(0)])
    x = FieldVector(gf16, [5, 5, 5])
    assert ao_apply(f, x).tolist() == [5 ^ 3, 9, 5]
    assert ao_apply(ao_identity(gf16, 3), x) == x


def test_ao_constant_on_a_batch():
    gf16 = get_field(4)
    f = ao_constant(gf16, [QaryAction.add(3), QaryAction.overwrite(9)])
    words = np.array([[5, 5], [0, 1], [15, 15]])
    assert f.apply_batch(words).tolist() == [[5 ^ 3, 9], [3, 9], [15 ^ 3, 9]]
    assert np.array_equal(ao_identity(gf16, 2).apply_batch(words), words)


@pytest.mark.parametrize('mode', [UNIFORM, STRUCTURED])
def test_ao_sample_with_no_reads(mode):
    gf16 = get_field(4)
    f = ao_sample(gf16, 5, 0, mode=mode, seed=3)
    assert f.reads == 0
    words = np.random.default_rng(4).integers(0, 16, size=(8, 5))
    out = f.apply_batch(words)
    assert out.shape == (8, 5)
    kinds, values = f.actions_for_alpha(0)
    expected = np.where(kinds == OVERWRITE, values, words ^ values)
    assert np.array_equal(out, expected)


def test_ao_difference():
    kinds = np.array([[ADD, OVERWRITE]])
    values = np.array([[3, 9]])
    words = np.array([[5, 5]])
    assert ao_difference(kinds, values, words).tolist() == [[3, 9 ^ 5]]


def test_ao_sample_budget_and_determinism():
    gf16 = get_field(4)
    a = ao_sample(gf16, 5, 0.2, mode=UNIFORM, seed=1)
    assert a.reads == 1
    assert a.digest() == ao_sample(gf16, 5, 0.2, mode=UNIFORM, seed=1).digest()
    for seed in range(6):
        f = ao_sample(gf16, 5, 0.2, mode=STRUCTURED, seed=seed)
        assert f.reads == 1


def test_bit_to_ao_correspondence():
    """Flip = Add(1), Keep = Add(0), Set_c = Overwrite(c)."""
    f = tamper_sample(6, 1 / 3, 1, mode=UNIFORM, seed=8)
    g = ao_from_bit(f)
    for value in range(64):
        x = FieldVector(GF2, [(value >> (5 - j)) & 1 for j in range(6)])
        assert ao_apply(g, x) == tamper_apply(f, x)
