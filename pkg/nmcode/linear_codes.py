"""
Linear codes: Hamming, extended Hamming, Simplex (as a dual), Reed-Solomon
and repetition constructions, brute-force distances, and coset labelling.

Distances are always computed by an exhaustive codeword sweep, never from
bound formulas. Small codes get both distances at construction; larger
ones leave the cached field empty and `min_distance()` sweeps on demand
(memoised per generator, so instances are never mutated).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .errors import CodeError, DimensionError, RankError
from .field_linalg import (
    GF2,
    FieldMatrix,
    FieldSpec,
    FieldVector,
    batch_mat_mul,
    enumerate_vectors,
    get_field,
    row_reduce,
)
from .workers import chunk_ranges, parallel_reduce

logger = logging.getLogger(__name__)

# Sweep sizes (number of codewords) for eager vs. on-demand distances.
BUILD_SWEEP_LIMIT = 1 << 16
MAX_SWEEP = 1 << 26
SWEEP_CHUNK = 1 << 15


@dataclass(frozen=True, eq=False)
class LinearCode:
    """
    An [n, k] linear code with generator G (k x n) and parity check H
    ((n-k) x n), G·Hᵀ = 0.

    `min_distance` and `dual_distance` are filled at construction only when
    q^k (resp. q^(n-k)) <= BUILD_SWEEP_LIMIT = 2^16. Otherwise they stay
    None and the module-level `min_distance(code)` / `dual_distance(code)`
    sweep lazily (up to MAX_SWEEP), memoised through an lru_cache keyed on
    the bytes of G (resp. H).
    """

    field: FieldSpec
    n: int
    k: int
    generator: FieldMatrix
    parity_check: FieldMatrix
    min_distance: Optional[int] = None
    dual_distance: Optional[int] = None
    name: str = 'linear'

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self) -> str:
        return (f"LinearCode({self.name}, [{self.n},{self.k}] over GF({self.q}), "
                f"d={self.min_distance}, d_dual={self.dual_distance})")

    def encode(self, message: FieldVector) -> FieldVector:
        if len(message) != self.k:
            raise DimensionError(f"message length {len(message)} != k={self.k}")
        return FieldVector(self.field, batch_mat_mul(self.field, message.elems[None, :],
                                                     self.generator.data)[0])

    def syndrome(self, x: FieldVector) -> FieldVector:
        if len(x) != self.n:
            raise DimensionError(f"word length {len(x)} != n={self.n}")
        return FieldVector(self.field, syndromes(self, x.elems[None, :])[0])

    def is_codeword(self, x: FieldVector) -> bool:
        return self.syndrome(x).is_zero()

    def codewords(self) -> np.ndarray:
        """All q^k codewords, in message-lexicographic order."""
        _check_sweep(self.field, self.k)
        return batch_mat_mul(self.field, enumerate_vectors(self.field, self.k), self.generator.data)

    def to_text(self) -> str:
        header = f"code {self.name} q={self.q} n={self.n} k={self.k}"
        return header + '\n' + self.generator.to_text()


def syndromes(code: LinearCode, words: np.ndarray) -> np.ndarray:
    """Row syndromes x·Hᵀ for a batch of words."""
    if code.parity_check.rows == 0:
        return np.zeros((words.shape[0], 0), dtype=np.int64)
    return batch_mat_mul(code.field, words, code.parity_check.data.T)


def _check_sweep(field: FieldSpec, dim: int, limit: int = MAX_SWEEP) -> int:
    size = field.q ** dim
    if size > limit:
        raise CodeError(f"exhaustive sweep over {size} codewords is too large; use smaller code")
    return size


def _sweep_min_weight(field: FieldSpec, gen: np.ndarray) -> int:
    k, n = gen.shape
    if k == 0:
        return n + 1
    total = field.q ** k

    def chunk_min(bounds):
        start, stop = bounds
        words = batch_mat_mul(field, enumerate_vectors(field, k, start, stop), gen)
        weights = np.count_nonzero(words, axis=1)
        if start == 0:
            weights[0] = n + 1
        return int(weights.min())

    return parallel_reduce(chunk_min, chunk_ranges(total, SWEEP_CHUNK), min, n + 1)


@lru_cache(maxsize=256)
def _cached_min_weight(field: FieldSpec, shape: Tuple[int, int], data: bytes) -> int:
    gen = np.frombuffer(data, dtype=np.int64).reshape(shape)
    return _sweep_min_weight(field, gen)


def _min_weight(field: FieldSpec, gen: FieldMatrix) -> int:
    return _cached_min_weight(field, gen.data.shape, gen.data.tobytes())


def min_distance(code: LinearCode) -> int:
    """
    Minimum Hamming weight over nonzero codewords (n+1 for the zero code).

    Raises:
        CodeError: if q^k exceeds the exhaustive sweep limit
    """
    if code.min_distance is not None:
        return code.min_distance
    _check_sweep(code.field, code.k)
    return _min_weight(code.field, code.generator)


def dual_distance(code: LinearCode) -> int:
    if code.dual_distance is not None:
        return code.dual_distance
    _check_sweep(code.field, code.n - code.k)
    return _min_weight(code.field, code.parity_check)


def code_from_generator(generator: FieldMatrix, name: str = 'linear',
                        parity_check: Optional[FieldMatrix] = None) -> LinearCode:
    """
    Build a code from a full-rank generator, deriving H when not given and
    computing distances eagerly when the sweeps are small.
    """
    field = generator.field
    k, n = generator.rows, generator.cols
    if generator.rank() != k:
        raise RankError(f"generator of {name} is not full rank")
    if parity_check is None:
        parity_check = generator.nullspace() if k else FieldMatrix.identity(field, n)
    if parity_check.rows != n - k or parity_check.cols != n:
        raise DimensionError(f"parity check of {name} must be {n - k}x{n}")
    if k and parity_check.rows:
        product = batch_mat_mul(field, generator.data, parity_check.data.T)
        if product.any():
            raise CodeError(f"G·Hᵀ != 0 for {name}")

    d = _min_weight(field, generator) if field.q ** k <= BUILD_SWEEP_LIMIT else None
    d_dual = (_min_weight(field, parity_check)
              if field.q ** (n - k) <= BUILD_SWEEP_LIMIT else None)
    code = LinearCode(field=field, n=n, k=k, generator=generator, parity_check=parity_check,
                      min_distance=d, dual_distance=d_dual, name=name)
    logger.debug(f"built {code!r}")
    return code


def code_from_parity_check(parity_check: FieldMatrix, name: str = 'linear') -> LinearCode:
    if parity_check.rank() != parity_check.rows:
        raise RankError(f"parity check of {name} is not full rank")
    generator = parity_check.nullspace()
    return code_from_generator(generator, name=name, parity_check=parity_check)


def _column_bits(value: int, h: int) -> list:
    return [(value >> (h - 1 - i)) & 1 for i in range(h)]


def hamming_code(h: int) -> LinearCode:
    """
    [2^h-1, 2^h-1-h, 3] Hamming code; parity-check columns are the nonzero
    h-bit vectors in lexicographic order (first row most significant).
    """
    if h < 2:
        raise CodeError(f"Hamming code needs h >= 2, got {h}")
    n = (1 << h) - 1
    H = np.array([_column_bits(j, h) for j in range(1, n + 1)], dtype=np.int64).T
    return code_from_parity_check(FieldMatrix(GF2, H), name=f"hamming h={h}")


def extended_hamming_code(h: int) -> LinearCode:
    """
    [2^h, 2^h-h-1, 4] extended Hamming code. Its dual is the first-order
    Reed-Muller code with distance 2^(h-1).
    """
    if h < 2:
        raise CodeError(f"extended Hamming code needs h >= 2, got {h}")
    n = 1 << h
    cols = np.array([_column_bits(j, h) for j in range(n)], dtype=np.int64).T
    H = np.vstack([np.ones((1, n), dtype=np.int64), cols])
    return code_from_parity_check(FieldMatrix(GF2, H), name=f"extended-hamming h={h}")


def repetition_code(n: int) -> LinearCode:
    if n < 1:
        raise CodeError("repetition code needs n >= 1")
    return code_from_generator(FieldMatrix(GF2, np.ones((1, n), dtype=np.int64)),
                               name=f"repetition n={n}")


def dual_code(code: LinearCode) -> LinearCode:
    """The dual code; its generator is the row-reduced parity check of `code`."""
    if code.parity_check.rows:
        reduced, _ = row_reduce(code.field, code.parity_check.data)
        generator = FieldMatrix(code.field, reduced)
    else:
        generator = FieldMatrix.zeros(code.field, 0, code.n)
    dual = LinearCode(
        field=code.field, n=code.n, k=code.n - code.k,
        generator=generator, parity_check=code.generator,
        min_distance=code.dual_distance, dual_distance=code.min_distance,
        name=f"dual({code.name})",
    )
    if dual.min_distance is None and code.field.q ** dual.k <= BUILD_SWEEP_LIMIT:
        dual = replace(dual, min_distance=_min_weight(code.field, generator))
    return dual


def evaluation_points(field: FieldSpec, n: int) -> list:
    """(1, α, α², ...) for a generator α, with 0 appended when n = q."""
    order = field.q - 1
    points = [int(field._exp[i]) for i in range(min(n, order))]
    if n == field.q:
        points.append(0)
    return points


def reed_solomon_code(field: FieldSpec, n: int, k: int) -> LinearCode:
    """
    Reed-Solomon [n, k] code with Vandermonde generator rows
    (p_j^i) for i = 0..k-1 over the fixed evaluation points.
    """
    if not 1 <= k <= n:
        raise CodeError(f"Reed-Solomon needs 1 <= k <= n, got k={k}, n={n}")
    if n > field.q:
        raise CodeError(f"Reed-Solomon length {n} exceeds field size {field.q}")
    points = np.array(evaluation_points(field, n), dtype=np.int64)
    G = np.stack([field.pow_arr(points, i) for i in range(k)])
    return code_from_generator(FieldMatrix(field, G), name=f"reed-solomon q={field.q} n={n} k={k}")


def label_matrix(code: LinearCode, coset_map: FieldMatrix) -> FieldMatrix:
    """(Ĝ·Hᵀ)⁻¹, the map from syndromes to coset labels."""
    if coset_map.rows != code.n - code.k or coset_map.cols != code.n:
        raise DimensionError(
            f"coset map must be {code.n - code.k}x{code.n}, got {coset_map.rows}x{coset_map.cols}"
        )
    if coset_map.rows == 0:
        return FieldMatrix.zeros(code.field, 0, 0)
    return coset_map.matmul(code.parity_check.transpose()).inverse()


def coset_labels(code: LinearCode, words: np.ndarray, labels: FieldMatrix) -> np.ndarray:
    """Batch form of `coset_syndrome_decode` given a precomputed label matrix."""
    if labels.rows == 0:
        return np.zeros((words.shape[0], 0), dtype=np.int64)
    return batch_mat_mul(code.field, syndromes(code, words), labels.data)


def coset_syndrome_decode(code: LinearCode, x: FieldVector, coset_map: FieldMatrix) -> FieldVector:
    """
    Label m of the coset containing x, where the coset of m is C + m·Ĝ.

    Computed as m = (x·Hᵀ)·(Ĝ·Hᵀ)⁻¹; total, since cosets partition the space.
    """
    if len(x) != code.n:
        raise DimensionError(f"word length {len(x)} != n={code.n}")
    labels = label_matrix(code, coset_map)
    return FieldVector(code.field, coset_labels(code, x.elems[None, :], labels)[0])


@dataclass(frozen=True, eq=False)
class CoordinateSolver:
    """
    Recovers the coefficient vector c from c·G for a full-row-rank G by
    inverting G on an information set of columns.
    """

    field: FieldSpec
    columns: Tuple[int, ...]
    inverse: FieldMatrix

    @classmethod
    def for_generator(cls, generator: FieldMatrix) -> 'CoordinateSolver':
        _, pivots = row_reduce(generator.field, generator.data)
        if len(pivots) != generator.rows:
            raise RankError("generator is not full rank")
        square = generator.columns(pivots)
        inverse = square.inverse() if generator.rows else FieldMatrix.zeros(generator.field, 0, 0)
        return cls(field=generator.field, columns=tuple(pivots), inverse=inverse)

    def solve(self, words: np.ndarray) -> np.ndarray:
        if not self.columns:
            return np.zeros((words.shape[0], 0), dtype=np.int64)
        return batch_mat_mul(self.field, words[:, list(self.columns)], self.inverse.data)


def code_from_text(text: str) -> LinearCode:
    """Parse the `LinearCode.to_text` form back into a code."""
    lines = text.strip().splitlines()
    if not lines or not lines[0].startswith('code '):
        raise CodeError("code text must start with a 'code <name> ...' header")
    header = lines[0][len('code '):]
    name = header.split(' q=')[0]
    generator = FieldMatrix.from_text('\n'.join(lines[1:]))
    return code_from_generator(generator, name=name)


def field_for_q(q: int) -> FieldSpec:
    w = q.bit_length() - 1
    if q != 1 << w:
        raise CodeError(f"alphabet size {q} is not a power of two")
    return get_field(w)
