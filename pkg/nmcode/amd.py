"""
Algebraic manipulation detection (AMD) codes.

The tag is the classical polynomial f(m, r) = r^(d+2) + sum_i m_i r^i over
GF(2^u). The message is zero-padded on the right to d*u bits and cut into d
blocks (each read most significant bit first); d is forced odd so that d+2
is odd. A codeword is the bit string (m, r, f(m, r)) of length k + 2u.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import CodeError, DimensionError, InfeasibleEnumeration
from .field_linalg import GF2, FieldSpec, FieldVector, get_field

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 1 << 24


@dataclass(frozen=True)
class AmdCode:
    """AMD code parameters: k message bits, tag field GF(2^u), d blocks."""

    k: int
    u: int
    blocks: int
    field: FieldSpec = dc_field(repr=False)

    @property
    def length(self) -> int:
        return self.k + 2 * self.u

    @property
    def delta(self) -> Fraction:
        """Enforced failure bound (d+1)/2^u over the padded block count."""
        return Fraction(self.blocks + 1, 1 << self.u)

    @property
    def nominal_bound(self) -> Fraction:
        """(k/u + 1)/2^u, the profile stated without padding."""
        return Fraction(self.k + self.u, self.u * (1 << self.u))

    def to_dict(self) -> Dict:
        return {
            'k': self.k,
            'u': self.u,
            'blocks': self.blocks,
            'delta': str(self.delta),
            'nominal_bound': str(self.nominal_bound),
        }


def amd_build(k: int, u: int) -> AmdCode:
    if k < 1:
        raise CodeError(f"AMD message length must be positive, got k={k}")
    if u < 1:
        raise CodeError(f"AMD tag degree must be positive, got u={u}")
    blocks = -(-k // u)
    if blocks % 2 == 0:
        blocks += 1
    return AmdCode(k=k, u=u, blocks=blocks, field=get_field(u))


def amd_failure_bound(code: AmdCode) -> Fraction:
    return code.delta


# --- bit/integer packing ---

def bits_to_ints(bits: np.ndarray, width: int) -> np.ndarray:
    """Rows of bits (length multiple of width) to rows of width-bit integers, MSB first."""
    bits = np.asarray(bits, dtype=np.int64)
    shaped = bits.reshape(bits.shape[:-1] + (bits.shape[-1] // width, width))
    weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
    return shaped @ weights


def ints_to_bits(values: np.ndarray, width: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    bits = (values[..., None] >> shifts) & 1
    return bits.reshape(values.shape[:-1] + (values.shape[-1] * width,)) if values.ndim else bits


def message_blocks(code: AmdCode, messages: np.ndarray) -> np.ndarray:
    """(N, k) message bits to (N, d) tag-field blocks."""
    messages = np.asarray(messages, dtype=np.int64)
    padded = np.zeros((messages.shape[0], code.blocks * code.u), dtype=np.int64)
    padded[:, :code.k] = messages
    return bits_to_ints(padded, code.u)


def amd_tags(code: AmdCode, blocks: np.ndarray, r: np.ndarray) -> np.ndarray:
    """f(m, r) for broadcastable block rows (.., d) and r values (..)."""
    gf = code.field
    r = np.asarray(r, dtype=np.int64)
    tag = gf.pow_arr(r, code.blocks + 2)
    for i in range(code.blocks):
        tag = tag ^ gf.mul_arr(blocks[..., i], gf.pow_arr(r, i + 1))
    return tag


def amd_encode_batch(code: AmdCode, messages: np.ndarray, r: np.ndarray) -> np.ndarray:
    messages = np.asarray(messages, dtype=np.int64)
    r = np.asarray(r, dtype=np.int64)
    tags = amd_tags(code, message_blocks(code, messages), r)
    return np.hstack([
        messages,
        ints_to_bits(r[:, None], code.u),
        ints_to_bits(tags[:, None], code.u),
    ])


def amd_decode_batch(code: AmdCode, words: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Messages and an accept mask for (N, k+2u) words; rejected rows are ⊥."""
    words = np.asarray(words, dtype=np.int64)
    if words.shape[-1] != code.length:
        raise DimensionError(f"AMD word length {words.shape[-1]} != {code.length}")
    messages = words[:, :code.k]
    r = bits_to_ints(words[:, code.k:code.k + code.u], code.u)[:, 0]
    tag = bits_to_ints(words[:, code.k + code.u:], code.u)[:, 0]
    ok = amd_tags(code, message_blocks(code, messages), r) == tag
    return messages, ok


def amd_encode(code: AmdCode, m: FieldVector, r: int) -> FieldVector:
    """
    AMD-encode a k-bit message with tag randomness r in GF(2^u).

    Args:
        code: AMD parameters
        m: Message bits, length k
        r: Tag-field element, drawn uniformly by the caller

    Returns:
        Bit vector (m, r, f(m, r)) of length k + 2u
    """
    if len(m) != code.k:
        raise DimensionError(f"AMD message length {len(m)} != k={code.k}")
    r = code.field.check(r)
    return FieldVector(GF2, amd_encode_batch(code, m.elems[None, :], np.array([r]))[0])


def amd_decode(code: AmdCode, x: FieldVector) -> Optional[FieldVector]:
    """Message bits, or None (⊥) when the tag does not match."""
    if len(x) != code.length:
        raise DimensionError(f"AMD word length {len(x)} != {code.length}")
    messages, ok = amd_decode_batch(code, x.elems[None, :])
    return FieldVector(GF2, messages[0]) if ok[0] else None


def amd_encode_symbols(code: AmdCode, symbols: FieldVector, r: int) -> FieldVector:
    """Symbol view over GF(2^u): (m_1..m_d, r, f) for d message symbols."""
    if symbols.field != code.field or len(symbols) != code.blocks:
        raise DimensionError(f"expected {code.blocks} symbols of GF(2^{code.u})")
    tag = amd_tags(code, symbols.elems[None, :], np.array([code.field.check(r)]))[0]
    return FieldVector(code.field, np.concatenate([symbols.elems, [r, tag]]))


def amd_decode_symbols(code: AmdCode, word: FieldVector) -> Optional[FieldVector]:
    if word.field != code.field or len(word) != code.blocks + 2:
        raise DimensionError(f"expected {code.blocks + 2} symbols of GF(2^{code.u})")
    symbols, r, tag = word.elems[:-2], word.elems[-2], word.elems[-1]
    if amd_tags(code, symbols[None, :], np.array([r]))[0] != tag:
        return None
    return FieldVector(code.field, symbols)


# --- packing into a wider symbol alphabet ---

def pack_codewords(code: AmdCode, words: np.ndarray, field: FieldSpec, symbols: int) -> np.ndarray:
    """Zero-pad (N, k+2u) AMD words to symbols*w bits and pack into GF(2^w) symbols."""
    capacity = symbols * field.w
    if code.length > capacity:
        raise DimensionError(f"AMD word of {code.length} bits does not fit {symbols} symbols of GF(2^{field.w})")
    padded = np.zeros((words.shape[0], capacity), dtype=np.int64)
    padded[:, :code.length] = words
    return bits_to_ints(padded, field.w)


def unpack_codewords(code: AmdCode, packed: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of `pack_codewords`; the mask is False when any pad bit is set."""
    bits = ints_to_bits(np.asarray(packed, dtype=np.int64), field.w)
    clean = ~bits[:, code.length:].any(axis=1)
    return bits[:, :code.length], clean


def tightest_code(k: int, capacity_bits: int) -> AmdCode:
    """
    Most secure AMD code for k-bit messages whose word fits `capacity_bits`
    (lowest enforced bound, ties to the smaller u).
    """
    best = None
    for u in range(1, capacity_bits // 2 + 1):
        if k + 2 * u > capacity_bits:
            break
        code = amd_build(k, u)
        key = (code.delta, code.u)
        if best is None or key < best[0]:
            best = (key, code)
    if best is None:
        raise CodeError(f"no AMD code for k={k} fits in {capacity_bits} bits")
    return best[1]


# --- exhaustive oracle ---

@dataclass
class AmdOracleReport:
    """Exhaustive failure rates of an AMD code, each maximised over messages."""

    code: AmdCode
    detection_failure: Fraction
    forgery: Fraction
    message_only: Fraction
    worst_offset: str
    offset_rates: Dict[str, Fraction]

    @property
    def within_bound(self) -> bool:
        return self.detection_failure <= self.code.delta

    def to_dict(self) -> Dict:
        return {
            'code_params': self.code.to_dict(),
            'claimed_bound': str(self.code.delta),
            'nominal_bound': str(self.code.nominal_bound),
            'detection_failure': str(self.detection_failure),
            'forgery': str(self.forgery),
            'message_only': str(self.message_only),
            'worst_offset': self.worst_offset,
            'within_bound': self.within_bound,
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['delta', 'failure_rate'])
        for offset, rate in self.offset_rates.items():
            writer.writerow([offset, f"{float(rate):.6f}"])
        return out.getvalue()


def _offset_label(code: AmdCode, dm: int, dr: int, dt: int) -> str:
    m_bits = format(dm, f'0{code.k}b')
    return f"{m_bits}|{dr:0{code.u}b}|{dt:0{code.u}b}"


def amd_exhaustive_oracle(code: AmdCode, limit: int = ORACLE_LIMIT) -> AmdOracleReport:
    """
    Exact max over m and nonzero offsets Δ of Pr_r[AMDdec(AMDenc(m, r) + Δ) ≠ ⊥].

    For each (m, Δm) the tag offsets f(m+Δm, r+Δr) - f(m, r) are tabulated for
    every (Δr, r) at once; the success count of Δt is its multiplicity. The
    offset is the same for every r, as required. Alongside the detection
    event the report carries the forgery event (decoded ∉ {m, ⊥}, i.e. Δm ≠ 0)
    and the message-only offsets (Δr = 0).

    Raises:
        InfeasibleEnumeration: if 2^(2k+3u) exceeds `limit`
    """
    k, u = code.k, code.u
    q = 1 << u
    size = 1 << (2 * k + 3 * u)
    if size > limit:
        raise InfeasibleEnumeration(f"AMD oracle (k={k}, u={u})", size, limit)

    gf = code.field
    elems = gf.elements()
    all_messages = np.array([message_bits(k, i) for i in range(1 << k)], dtype=np.int64)
    blocks = message_blocks(code, all_messages)
    # tag_table[m, r] = f(m, r)
    tag_table = amd_tags(code, blocks[:, None, :], elems[None, :])
    shifted = elems[:, None] ^ elems[None, :]      # [dr, r] -> r + dr

    counts = np.zeros((1 << k, q, q), dtype=np.int64)   # [dm, dr, dt], max over m
    for m in range(1 << k):
        base = tag_table[m]
        for dm in range(1 << k):
            moved = tag_table[m ^ dm][shifted]       # [dr, r]
            offsets = moved ^ base[None, :]
            flat = np.arange(q)[:, None] * q + offsets
            hist = np.bincount(flat.ravel(), minlength=q * q).reshape(q, q)
            np.maximum(counts[dm], hist, out=counts[dm])
    counts[0, 0, 0] = 0

    rates = {}
    worst = (0, '')
    for dm in range(1 << k):
        for dr in range(q):
            for dt in range(q):
                if dm == dr == dt == 0:
                    continue
                label = _offset_label(code, dm, dr, dt)
                rates[label] = Fraction(int(counts[dm, dr, dt]), q)
                if counts[dm, dr, dt] > worst[0]:
                    worst = (int(counts[dm, dr, dt]), label)

    report = AmdOracleReport(
        code=code,
        detection_failure=Fraction(int(counts.max()), q),
        forgery=Fraction(int(counts[1:].max()), q),
        message_only=Fraction(int(counts[1:, 0, :].max()), q),
        worst_offset=worst[1],
        offset_rates=rates,
    )
    logger.info(f"AMD oracle k={k} u={u}: failure {report.detection_failure} "
                f"(bound {code.delta}, nominal {code.nominal_bound})")
    return report


def offset_rate(code: AmdCode, offset: FieldVector) -> Fraction:
    """Slow reference path: max over m of Pr_r[decode(encode(m, r) + Δ) ≠ ⊥] for one Δ."""
    if len(offset) != code.length:
        raise DimensionError(f"offset length {len(offset)} != {code.length}")
    q = 1 << code.u
    worst = 0
    for m in range(1 << code.k):
        bits = np.array([message_bits(code.k, m)] * q, dtype=np.int64)
        words = amd_encode_batch(code, bits, np.arange(q)) ^ offset.elems[None, :]
        _, ok = amd_decode_batch(code, words)
        worst = max(worst, int(ok.sum()))
    return Fraction(worst, q)


def message_bits(k: int, index: int) -> List[int]:
    return [(index >> (k - 1 - j)) & 1 for j in range(k)]
