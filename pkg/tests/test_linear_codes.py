"""
Tests for linear codes: Hamming, extended Hamming, Reed-Solomon, duals and
coset decoding.
"""

import numpy as np
import pytest

from nmcode.errors import CodeError, RankError
from nmcode.field_linalg import GF2, FieldMatrix, FieldVector, enumerate_vectors, get_field
from nmcode.linear_codes import (
    CoordinateSolver,
    code_from_generator,
    code_from_text,
    coset_syndrome_decode,
    dual_code,
    dual_distance,
    extended_hamming_code,
    field_for_q,
    hamming_code,
    min_distance,
    reed_solomon_code,
    repetition_code,
)


def test_hamming_7_4():
    """[7,4,3] with a simplex dual of distance 4."""
    code = hamming_code(3)
    assert (code.n, code.k) == (7, 4)
    assert min_distance(code) == 3
    assert dual_distance(code) == 4


def test_large_dimension_distance_is_deferred():
    """[31,26]: 2^26 codewords are left to a lazy sweep, the 2^5 dual is swept at build."""
    code = hamming_code(5)
    assert code.min_distance is None
    assert code.dual_distance == 16
    assert dual_distance(code) == 16


def test_hamming_codewords_have_zero_syndrome():
    code = hamming_code(3)
    words = code.codewords()
    assert words.shape == (16, 7)
    for word in words:
        assert code.is_codeword(FieldVector(GF2, word))


def test_extended_hamming_h4():
    """[16,11,4]; the dual is first-order Reed-Muller with distance 8."""
    code = extended_hamming_code(4)
    assert (code.n, code.k) == (16, 11)
    assert code.n - code.k == 5
    assert min_distance(code) == 4
    assert dual_distance(code) == 8


def test_reed_solomon_5_3_is_mds():
    """RS[5,3] over GF(16): d = 3 and the dual RS[5,2] has d = 4."""
    code = reed_solomon_code(get_field(4), 5, 3)
    assert min_distance(code) == 3
    assert dual_distance(code) == 4


def test_reed_solomon_too_long():
    with pytest.raises(CodeError, match='exceeds field size'):
        reed_solomon_code(get_field(2), 5, 2)


def test_dual_of_dual_distances_swap():
    code = hamming_code(3)
    dual = dual_code(code)
    assert (dual.n, dual.k) == (7, 3)
    assert min_distance(dual) == 4
    assert dual_distance(dual) == 3


def test_repetition_code():
    code = repetition_code(5)
    assert min_distance(code) == 5
    assert dual_distance(code) == 2


def test_coset_decode_recovers_label():
    """x = m·Ĝ + c decodes to m for every codeword c of C."""
    code = hamming_code(3)
    coset_map = FieldMatrix(GF2, [[1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0, 0]])
    m = FieldVector.from_bits('101')
    shift = FieldVector(GF2, m.elems @ coset_map.data % 2)
    for c in code.codewords():
        x = FieldVector(GF2, shift.elems ^ c)
        assert coset_syndrome_decode(code, x, coset_map) == m


def test_coordinate_solver_inverts_encoding():
    code = reed_solomon_code(get_field(4), 5, 3)
    solver = CoordinateSolver.for_generator(code.generator)
    coeffs = enumerate_vectors(code.field, 3, 0, 200)
    words = np.stack([code.encode(FieldVector(code.field, c)).elems for c in coeffs])
    assert np.array_equal(solver.solve(words), coeffs)


def test_code_text_roundtrip():
    code = hamming_code(3)
    again = code_from_text(code.to_text())
    assert again.generator == code.generator
    assert again.name == code.name


def test_dependent_generator_rejected():
    with pytest.raises(RankError, match="not full rank"):
        code_from_generator(FieldMatrix(GF2, [[1, 1, 0], [1, 1, 0]]))


def test_field_for_q():
    assert field_for_q(16) == get_field(4)
    with pytest.raises(CodeError):
        field_for_q(12)
