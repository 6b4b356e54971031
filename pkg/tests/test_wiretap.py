"""
Tests for coset wiretap II codes and the privacy verifier.
"""

from fractions import Fraction

import pytest

from nmcode.errors import CodeError, DimensionError
from nmcode.field_linalg import FieldVector, enumerate_vectors, get_field
from nmcode.linear_codes import extended_hamming_code, hamming_code, reed_solomon_code
from nmcode.wiretap import (
    EXACT,
    MONTECARLO,
    coset_words,
    wt_build,
    wt_decode,
    wt_encode,
    wt_verify_privacy,
)


@pytest.fixture(scope='module')
def hamming_wt():
    return wt_build(hamming_code(3), seed=0)


def test_parameters(hamming_wt):
    """[7,4] coset code: ℓ = 3, ρ = (4-1)/7, with a note on the 1/2 figure."""
    assert hamming_wt.ell == 3
    assert hamming_wt.randomness_dim == 4
    assert hamming_wt.rho == Fraction(3, 7)
    assert hamming_wt.rate <= 1 - hamming_wt.rho
    assert any('1/2' in note for note in hamming_wt.notes)


def test_decode_inverts_encode(hamming_wt):
    for m in enumerate_vectors(hamming_wt.field, 3):
        for r in enumerate_vectors(hamming_wt.field, 4):
            x = wt_encode(hamming_wt, FieldVector(hamming_wt.field, m), FieldVector(hamming_wt.field, r))
            assert wt_decode(hamming_wt, x).tolist() == list(m)


def test_cosets_are_disjoint(hamming_wt):
    seen = set()
    for m in enumerate_vectors(hamming_wt.field, 3):
        words = {tuple(w) for w in coset_words(hamming_wt, m)}
        assert len(words) == 16
        assert not seen & words
        seen |= words
    assert len(seen) == 128


def test_perfect_privacy_up_to_three(hamming_wt):
    """Exact SD is 0 for every message pair and every |S| <= 3."""
    report = wt_verify_privacy(hamming_wt, 3)
    assert report.exact_max_sd == 0
    assert all(sd == 0 for sd in report.per_size.values())
    assert report.witness is not None
    assert report.sets_checked == 1 + 7 + 21 + 35


def test_leak_at_four(hamming_wt):
    """Some 4-set is a dependent set of parity-check columns and leaks."""
    report = wt_verify_privacy(hamming_wt, 4)
    assert report.per_size[4] > 0
    assert report.exact_max_sd > 0
    assert len(report.witness[0]) == 4


def test_privacy_csv_header(hamming_wt):
    report = wt_verify_privacy(hamming_wt, 2)
    lines = report.to_csv().splitlines()
    assert lines[0] == 'set,m0,m1,sd'
    assert len(lines) == 1 + report.sets_checked


def test_montecarlo_is_seeded(hamming_wt):
    a = wt_verify_privacy(hamming_wt, 3, mode=MONTECARLO, samples=2000, set_samples=8, seed=5)
    b = wt_verify_privacy(hamming_wt, 3, mode=MONTECARLO, samples=2000, set_samples=8, seed=5)
    assert a.to_dict() == b.to_dict()
    assert a.max_sd <= a.half_width


def test_extended_hamming_rho():
    """[16,11] extended Hamming: ℓ = 5 and ρ = 7/16."""
    wt = wt_build(extended_hamming_code(4), seed=0)
    assert wt.ell == 5
    assert wt.rho == Fraction(7, 16)


def test_reed_solomon_coset_code():
    """RS[5,3] over GF(16): ρ = 3/5, two message symbols."""
    wt = wt_build(reed_solomon_code(get_field(4), 5, 3), seed=0)
    assert wt.ell == 2
    assert wt.rho == Fraction(3, 5)
    report = wt_verify_privacy(wt, 2, mode=EXACT)
    assert report.exact_max_sd == 0


def test_full_space_rejected():
    code = reed_solomon_code(get_field(2), 3, 3)
    with pytest.raises(CodeError):
        wt_build(code, seed=0)


def test_bad_set_size(hamming_wt):
    with pytest.raises(DimensionError):
        wt_verify_privacy(hamming_wt, 8)


def test_encode_rejects_wrong_lengths(hamming_wt):
    with pytest.raises(DimensionError):
        wt_encode(hamming_wt, FieldVector.from_bits('10'), FieldVector.from_bits('0000'))
    with pytest.raises(DimensionError):
        wt_encode(hamming_wt, FieldVector.from_bits('101'), FieldVector.from_bits('000'))
