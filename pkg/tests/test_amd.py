"""
Tests for the AMD code: encoding, detection and the exhaustive oracle.
"""

from fractions import Fraction

import numpy as np
import pytest

from nmcode.amd import (
    amd_build,
    amd_decode,
    amd_decode_symbols,
    amd_encode,
    amd_encode_symbols,
    amd_exhaustive_oracle,
    offset_rate,
    pack_codewords,
    tightest_code,
    unpack_codewords,
)
from nmcode.errors import CodeError, InfeasibleEnumeration
from nmcode.field_linalg import FieldVector, get_field


def test_parameters():
    code = amd_build(3, 3)
    assert code.length == 9
    assert code.blocks == 1
    assert code.delta == Fraction(1, 4)
    assert code.nominal_bound == Fraction(1, 4)


def test_even_block_count_is_padded():
    """k=4, u=1 gives 4 blocks, padded to 5 so d+2 stays odd."""
    code = amd_build(4, 1)
    assert code.blocks == 5
    assert code.delta == Fraction(6, 2)


def test_roundtrip_every_message_and_r():
    code = amd_build(3, 3)
    for m in range(8):
        bits = FieldVector.from_bits(format(m, '03b'))
        for r in range(8):
            word = amd_encode(code, bits, r)
            assert len(word) == 9
            assert amd_decode(code, word) == bits


def test_tampered_tag_detected():
    code = amd_build(3, 3)
    word = amd_encode(code, FieldVector.from_bits('101'), 5)
    flipped = FieldVector(word.field, word.elems ^ np.eye(9, dtype=np.int64)[8])
    assert amd_decode(code, flipped) is None


def test_oracle_3_3_within_quarter():
    """Exhaustive max failure over (m, Δ ≠ 0, r) is at most 1/4."""
    report = amd_exhaustive_oracle(amd_build(3, 3))
    assert report.detection_failure <= Fraction(1, 4)
    assert report.within_bound
    assert report.forgery <= report.detection_failure
    assert report.message_only <= report.forgery


def test_oracle_1_2():
    """(1,2): the enforced bound is 1/2; the nominal 3/8 is reported alongside."""
    code = amd_build(1, 2)
    report = amd_exhaustive_oracle(code)
    assert code.nominal_bound == Fraction(3, 8)
    assert report.detection_failure <= Fraction(1, 2)
    assert report.to_dict()['nominal_bound'] == '3/8'


def test_oracle_matches_slow_path_on_worst_offset():
    code = amd_build(2, 2)
    report = amd_exhaustive_oracle(code)
    dm, dr, dt = report.worst_offset.split('|')
    offset = FieldVector.from_bits(dm + dr + dt)
    assert offset_rate(code, offset) == report.detection_failure


def test_oracle_csv_header():
    report = amd_exhaustive_oracle(amd_build(1, 1))
    lines = report.to_csv().splitlines()
    assert lines[0] == 'delta,failure_rate'
    # every nonzero offset of a 3-bit word
    assert len(lines) == 1 + 7


def test_oracle_refuses_large_codes():
    with pytest.raises(InfeasibleEnumeration, match='montecarlo'):
        amd_exhaustive_oracle(amd_build(8, 8))


def test_symbol_view_roundtrip():
    code = amd_build(3, 3)
    symbols = FieldVector(get_field(3), [6])
    word = amd_encode_symbols(code, symbols, 3)
    assert amd_decode_symbols(code, word) == symbols
    bad = FieldVector(word.field, word.elems ^ np.array([1, 0, 0]))
    assert amd_decode_symbols(code, bad) is None


def test_tightest_code_for_two_wire_symbols():
    """2 message bits in 8 bits of GF(16) symbols: u = 3 and δ = 1/4."""
    code = tightest_code(2, 8)
    assert code.u == 3
    assert code.delta == Fraction(1, 4)
    with pytest.raises(CodeError):
        tightest_code(4, 5)


def test_packing_flags_dirty_padding():
    code = amd_build(2, 2)
    gf16 = get_field(4)
    words = np.array([amd_encode(code, FieldVector.from_bits('10'), 3).elems])
    packed = pack_codewords(code, words, gf16, 2)
    bits, clean = unpack_codewords(code, packed, gf16)
    assert clean.all()
    assert np.array_equal(bits, words)
    _, clean = unpack_codewords(code, packed ^ np.array([[0, 1]]), gf16)
    assert not clean.any()
