"""
Arithmetic over GF(2) and GF(2^w) and the small dense linear algebra the
code constructions need.

Field elements are w-bit integers in the polynomial basis: bit i is the
coefficient of x^i. Addition is XOR; multiplication goes through exp/log
tables built from a generator of the multiplicative group, so the numpy
array variants (`mul_arr`, `batch_mat_mul`) vectorise over whole codeword
ensembles.

Vectors multiply matrices from the left everywhere (row-vector
convention): `mat_vec_mul(M, v)` is v·M with len(v) == M.rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionError, FieldError, RankError

# Fixed moduli, bit w set for x^w. All of them are primitive.
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

MAX_DEGREE = 16


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials over GF(2)."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def _poly_mod(a: int, m: int) -> int:
    deg_m = m.bit_length() - 1
    while a and a.bit_length() - 1 >= deg_m:
        a ^= m << (a.bit_length() - 1 - deg_m)
    return a


def is_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    degree = modulus.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _poly_mod(modulus, divisor) == 0:
            return False
    return True


def _prime_factors(value: int) -> List[int]:
    factors = []
    p = 2
    while p * p <= value:
        if value % p == 0:
            factors.append(p)
            while value % p == 0:
                value //= p
        p += 1
    if value > 1:
        factors.append(value)
    return factors


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """
    GF(2^w) with a fixed irreducible modulus.

    Instances are immutable; use `get_field(w)` for the shared default
    instance of each degree.
    """

    w: int
    modulus: int
    _exp: np.ndarray = dc_field(repr=False, compare=False)
    _log: np.ndarray = dc_field(repr=False, compare=False)

    @property
    def characteristic(self) -> int:
        return 2

    @property
    def q(self) -> int:
        return 1 << self.w

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and (self.w, self.modulus) == (other.w, other.modulus)

    def __hash__(self) -> int:
        return hash((self.w, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec(w={self.w}, modulus=0b{self.modulus:b})"

    # --- scalar arithmetic ---

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of GF(2^{self.w})")
        return a

    def add(self, a: int, b: int) -> int:
        return self.check(a) ^ self.check(b)

    def mul(self, a: int, b: int) -> int:
        a, b = self.check(a), self.check(b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[int(self._log[a]) + int(self._log[b])])

    def inv(self, a: int) -> int:
        a = self.check(a)
        if a == 0:
            raise FieldError("non-invertible: 0 has no multiplicative inverse")
        order = self.q - 1
        return int(self._exp[(order - int(self._log[a])) % order])

    def pow(self, a: int, e: int) -> int:
        a = self.check(a)
        e = int(e)
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise FieldError("non-invertible: 0 has no multiplicative inverse")
            return 0
        order = self.q - 1
        return int(self._exp[(int(self._log[a]) * e) % order])

    # --- vectorised arithmetic ---

    def mul_arr(self, a, b) -> np.ndarray:
        """Elementwise product of broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.w == 1:
            return a & b
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def pow_arr(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        order = self.q - 1
        out = self._exp[(self._log[a] * e) % order]
        return np.where(a == 0, 0, out)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)


def _build_tables(w: int, modulus: int) -> Tuple[np.ndarray, np.ndarray]:
    q = 1 << w
    order = q - 1

    def mulmod(a: int, b: int) -> int:
        return _poly_mod(_clmul(a, b), modulus)

    def powmod(a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = mulmod(result, a)
            a = mulmod(a, a)
            e >>= 1
        return result

    generator = 1
    if order > 1:
        factors = _prime_factors(order)
        for candidate in range(2, q):
            if all(powmod(candidate, order // p) != 1 for p in factors):
                generator = candidate
                break
        else:
            raise FieldError(f"no generator found for modulus 0b{modulus:b}")

    exp = np.zeros(2 * order + 1, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    value = 1
    for i in range(order):
        exp[i] = value
        log[value] = i
        value = mulmod(value, generator)
    exp[order:2 * order] = exp[:order]
    exp[2 * order] = exp[0]
    exp.setflags(write=False)
    log.setflags(write=False)
    return exp, log


def make_field(w: int, modulus: Optional[int] = None) -> FieldSpec:
    """
    Build GF(2^w), verifying the modulus.

    Args:
        w: Extension degree, 1 <= w <= 16
        modulus: Irreducible polynomial as a bitmask (bit w set); defaults
            to the fixed table entry for w

    Returns:
        FieldSpec
    """
    if not 1 <= w <= MAX_DEGREE:
        raise FieldError(f"extension degree must be in 1..{MAX_DEGREE}, got {w}")
    if modulus is None:
        modulus = DEFAULT_MODULI[w]
    if modulus.bit_length() - 1 != w:
        raise FieldError(f"modulus 0b{modulus:b} does not have degree {w}")
    if not is_irreducible(modulus):
        raise FieldError(f"modulus 0b{modulus:b} is reducible")
    exp, log = _build_tables(w, modulus)
    return FieldSpec(w=w, modulus=modulus, _exp=exp, _log=log)


@lru_cache(maxsize=None)
def get_field(w: int) -> FieldSpec:
    """Shared default instance of GF(2^w)."""
    return make_field(w)


GF2 = get_field(1)


def field_ops(field: FieldSpec, a: int, b: int, kind: str) -> int:
    """
    Single entry point for scalar field arithmetic.

    Args:
        field: The field both operands belong to
        a: First operand
        b: Second operand (exponent for 'pow', ignored for 'inv')
        kind: One of 'add', 'mul', 'inv', 'pow'

    Returns:
        The reduced result
    """
    if kind == 'add':
        return field.add(a, b)
    if kind == 'mul':
        return field.mul(a, b)
    if kind == 'inv':
        return field.inv(a)
    if kind == 'pow':
        return field.pow(a, b)
    raise FieldError(f"unknown field operation: {kind}")


def poly_eval(field: FieldSpec, coeffs: Sequence[int], x: int) -> int:
    """Horner evaluation of sum(coeffs[i] * x^i)."""
    result = 0
    for c in reversed(list(coeffs)):
        result = field.mul(result, x) ^ field.check(c)
    return result


def _frozen(data, dtype=np.int64) -> np.ndarray:
    arr = np.array(data, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FieldVector:
    """An immutable vector over a FieldSpec."""

    field: FieldSpec
    elems: np.ndarray

    def __post_init__(self):
        arr = np.array(self.elems, dtype=np.int64).reshape(-1)
        if arr.size and (arr.min() < 0 or arr.max() >= self.field.q):
            raise FieldError(f"vector has entries outside GF(2^{self.field.w})")
        arr.setflags(write=False)
        object.__setattr__(self, 'elems', arr)

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> 'FieldVector':
        return cls(field, np.zeros(n, dtype=np.int64))

    @classmethod
    def from_bits(cls, bits: Iterable[int] | str) -> 'FieldVector':
        """Binary vector from an iterable of 0/1 or a string like '0101'."""
        if isinstance(bits, str):
            bits = [int(ch) for ch in bits]
        return cls(GF2, list(bits))

    def __len__(self) -> int:
        return int(self.elems.size)

    def __iter__(self):
        return iter(int(e) for e in self.elems)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return FieldVector(self.field, self.elems[idx])
        return int(self.elems[idx])

    def __add__(self, other: 'FieldVector') -> 'FieldVector':
        if other.field != self.field or len(other) != len(self):
            raise DimensionError("vectors must share field and length")
        return FieldVector(self.field, self.elems ^ other.elems)

    __sub__ = __add__

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldVector) and other.field == self.field
                and np.array_equal(other.elems, self.elems))

    def __hash__(self) -> int:
        return hash((self.field, self.elems.tobytes()))

    def __repr__(self) -> str:
        return f"FieldVector(w={self.field.w}, {self.tolist()})"

    def tolist(self) -> List[int]:
        return [int(e) for e in self.elems]

    def weight(self) -> int:
        return int(np.count_nonzero(self.elems))

    def is_zero(self) -> bool:
        return not self.elems.any()

    def concat(self, other: 'FieldVector') -> 'FieldVector':
        if other.field != self.field:
            raise DimensionError("vectors must share a field")
        return FieldVector(self.field, np.concatenate([self.elems, other.elems]))

    def to_text(self) -> str:
        """'0101' for binary vectors, space-separated hex otherwise."""
        if self.field.w == 1:
            return ''.join(str(int(e)) for e in self.elems)
        return ' '.join(f"{int(e):x}" for e in self.elems)


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """An immutable dense matrix over a FieldSpec (row-major)."""

    field: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionError(f"matrix data must be 2-D, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.field.q):
            raise FieldError(f"matrix has entries outside GF(2^{self.field.w})")
        arr.setflags(write=False)
        object.__setattr__(self, 'data', arr)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> 'FieldMatrix':
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, size: int) -> 'FieldMatrix':
        return cls(field, np.eye(size, dtype=np.int64))

    @property
    def rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def cols(self) -> int:
        return int(self.data.shape[1])

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldMatrix) and other.field == self.field
                and other.data.shape == self.data.shape
                and np.array_equal(other.data, self.data))

    def __hash__(self) -> int:
        return hash((self.field, self.data.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix(w={self.field.w}, {self.rows}x{self.cols})"

    def row(self, i: int) -> FieldVector:
        return FieldVector(self.field, self.data[i])

    def transpose(self) -> 'FieldMatrix':
        return FieldMatrix(self.field, self.data.T)

    def vstack(self, other: 'FieldMatrix') -> 'FieldMatrix':
        if other.field != self.field:
            raise DimensionError("matrices must share a field")
        if self.rows == 0:
            return other
        if other.rows == 0:
            return self
        if other.cols != self.cols:
            raise DimensionError(f"cannot stack {self.cols} and {other.cols} columns")
        return FieldMatrix(self.field, np.vstack([self.data, other.data]))

    def columns(self, idx: Sequence[int]) -> 'FieldMatrix':
        return FieldMatrix(self.field, self.data[:, list(idx)].reshape(self.rows, len(idx)))

    def matmul(self, other: 'FieldMatrix') -> 'FieldMatrix':
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return FieldMatrix(self.field, batch_mat_mul(self.field, self.data, other.data))

    def rank(self) -> int:
        return len(row_reduce(self.field, self.data)[1])

    def inverse(self) -> 'FieldMatrix':
        if self.rows != self.cols:
            raise DimensionError("only square matrices can be inverted")
        size = self.rows
        augmented = np.hstack([self.data, np.eye(size, dtype=np.int64)])
        reduced, pivots = row_reduce(self.field, augmented)
        if pivots[:size] != tuple(range(size)) or len(pivots) < size:
            raise RankError("matrix is singular")
        return FieldMatrix(self.field, reduced[:, size:])

    def nullspace(self) -> 'FieldMatrix':
        """Basis (as rows) of {x : M·xᵀ = 0}."""
        reduced, pivots = row_reduce(self.field, self.data)
        free = [c for c in range(self.cols) if c not in set(pivots)]
        basis = np.zeros((len(free), self.cols), dtype=np.int64)
        for i, f in enumerate(free):
            basis[i, f] = 1
            for r, p in enumerate(pivots):
                basis[i, p] = reduced[r, f]
        return FieldMatrix(self.field, basis)

    def to_text(self) -> str:
        """Plain-text form: 'w rows cols' then one line of hex entries per row."""
        lines = [f"{self.field.w} {self.rows} {self.cols}"]
        for row in self.data:
            lines.append(' '.join(f"{int(e):x}" for e in row))
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_text(cls, text: str) -> 'FieldMatrix':
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise DimensionError("empty matrix text")
        try:
            w, rows, cols = (int(tok) for tok in lines[0].split())
        except ValueError as e:
            raise DimensionError(f"bad matrix header {lines[0]!r}: {e}") from e
        body = lines[1:1 + rows]
        if len(body) != rows:
            raise DimensionError(f"expected {rows} rows, found {len(body)}")
        data = np.zeros((rows, cols), dtype=np.int64)
        for i, line in enumerate(body):
            entries = [int(tok, 16) for tok in line.split()]
            if len(entries) != cols:
                raise DimensionError(f"row {i} has {len(entries)} entries, expected {cols}")
            data[i] = entries
        return cls(get_field(w), data)


def batch_mat_mul(field: FieldSpec, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """
    Product of integer arrays over the field: (N x r) · (r x c).

    GF(2) uses an integer matmul reduced mod 2; larger fields accumulate
    one rank-1 term per inner index.
    """
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    if left.shape[-1] != right.shape[0]:
        raise DimensionError(f"inner dimensions differ: {left.shape} x {right.shape}")
    if field.w == 1:
        return (left @ right) & 1
    out = np.zeros(left.shape[:-1] + (right.shape[1],), dtype=np.int64)
    for i in range(right.shape[0]):
        out ^= field.mul_arr(left[..., i:i + 1], right[i:i + 1, :])
    return out


def row_reduce(field: FieldSpec, data: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    mat = np.array(data, dtype=np.int64)
    rows, cols = mat.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(mat[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            mat[[r, p]] = mat[[p, r]]
        mat[r] = field.mul_arr(mat[r], field.inv(int(mat[r, c])))
        factors = mat[:, c].copy()
        factors[r] = 0
        if factors.any():
            mat ^= field.mul_arr(factors[:, None], mat[r][None, :])
        pivots.append(c)
        r += 1
    return mat, tuple(pivots)


def mat_vec_mul(M: FieldMatrix, v: FieldVector) -> FieldVector:
    """Row vector times matrix: v·M."""
    if v.field != M.field:
        raise DimensionError("vector and matrix belong to different fields")
    if len(v) != M.rows:
        raise DimensionError(f"vector length {len(v)} does not match {M.rows} matrix rows")
    if M.rows == 0:
        return FieldVector.zeros(M.field, M.cols)
    return FieldVector(M.field, batch_mat_mul(M.field, v.elems[None, :], M.data)[0])


def extend_to_full_rank(G: FieldMatrix, extra_rows: int, seed: int) -> FieldMatrix:
    """
    Append rows to G so the stacked matrix has full row rank.

    Random rows are tried first (seeded); unit vectors in column order are
    the deterministic fallback, so the result depends only on (G, seed).

    Args:
        G: Matrix with linearly independent rows
        extra_rows: Number of rows to append
        seed: RNG seed

    Returns:
        (G.rows + extra_rows) x G.cols matrix with G as its top rows
    """
    if extra_rows < 0:
        raise DimensionError("extra_rows must be non-negative")
    if G.rows + extra_rows > G.cols:
        raise DimensionError(
            f"cannot extend {G.rows} rows by {extra_rows} within {G.cols} columns"
        )
    if G.rank() != G.rows:
        raise RankError("rows of G are linearly dependent")
    if extra_rows == 0:
        return G

    field = G.field
    rng = np.random.default_rng(seed)
    current = G.data.copy()
    rank = G.rows
    target = G.rows + extra_rows
    attempts = 0
    while rank < target and attempts < 64 * extra_rows:
        attempts += 1
        candidate = rng.integers(0, field.q, size=(1, G.cols), dtype=np.int64)
        stacked = np.vstack([current, candidate]) if current.size else candidate
        if len(row_reduce(field, stacked)[1]) > rank:
            current = stacked
            rank += 1
    col = 0
    while rank < target:
        unit = np.zeros((1, G.cols), dtype=np.int64)
        unit[0, col] = 1
        stacked = np.vstack([current, unit]) if current.size else unit
        if len(row_reduce(field, stacked)[1]) > rank:
            current = stacked
            rank += 1
        col += 1
    return FieldMatrix(field, current)


def enumerate_vectors(field: FieldSpec, length: int, start: int = 0,
                      stop: Optional[int] = None) -> np.ndarray:
    """
    Rows start..stop-1 of the lexicographic list of all vectors of the
    given length (first coordinate most significant).
    """
    total = field.q ** length
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((idx.size, length), dtype=np.int64)
    for j in range(length - 1, -1, -1):
        out[:, j] = idx % field.q
        idx //= field.q
    return out


def pack_digits(field: FieldSpec, values: np.ndarray) -> np.ndarray:
    """Inverse of `enumerate_vectors`: rows of digits to their index."""
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros(values.shape[:-1], dtype=np.int64)
    for j in range(values.shape[-1]):
        out = out * field.q + values[..., j]
    return out
