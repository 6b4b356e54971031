"""
Coset-coding wiretap II codes.

A randomness code C of dimension n-ℓ is extended by ℓ rows Ĝ to a full
rank [G; Ĝ]; the message m selects the coset C + m·Ĝ and the encoder picks
a uniform element of it. Any reading set of size below the dual distance
of C sees the same distribution for every message.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import config
from .errors import CodeError, DimensionError, InfeasibleEnumeration
from .field_linalg import (
    FieldMatrix,
    FieldVector,
    batch_mat_mul,
    enumerate_vectors,
    extend_to_full_rank,
    pack_digits,
)
from .linear_codes import LinearCode, coset_labels, dual_distance, label_matrix
from .outcomes import mc_half_width
from .workers import chunk_ranges, parallel_map

logger = logging.getLogger(__name__)

EXACT = 'exact'
MONTECARLO = 'montecarlo'


@dataclass(frozen=True, eq=False)
class CosetWtCode:
    code: LinearCode
    coset_map: FieldMatrix
    labels: FieldMatrix = dc_field(repr=False)
    rho: Fraction = Fraction(0)
    epsilon: Fraction = Fraction(0)
    notes: Tuple[str, ...] = ()

    @property
    def field(self):
        return self.code.field

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def ell(self) -> int:
        return self.coset_map.rows

    @property
    def randomness_dim(self) -> int:
        return self.code.k

    @property
    def rate(self) -> Fraction:
        return Fraction(self.ell, self.n)

    def to_dict(self) -> Dict:
        return {
            'code': self.code.name,
            'q': self.field.q,
            'n': self.n,
            'ell': self.ell,
            'rho': str(self.rho),
            'epsilon': str(self.epsilon),
            'notes': list(self.notes),
        }


def wt_build(code: LinearCode, seed: int, epsilon: Fraction = Fraction(0)) -> CosetWtCode:
    """
    Extend the randomness code C to a coset wiretap code.

    Args:
        code: Randomness code C, dimension n-ℓ
        seed: Seed for the appended rows Ĝ
        epsilon: Privacy error to record; coset codes are perfect, so only
            synthetic imperfect codes pass a nonzero value

    Returns:
        CosetWtCode with ρ = (d⊥(C) - 1)/n
    """
    ell = code.n - code.k
    if ell == 0:
        raise CodeError(f"{code.name} is the full space; no message space left")
    stacked = extend_to_full_rank(code.generator, ell, seed)
    coset_map = FieldMatrix(code.field, stacked.data[code.k:])
    rho = Fraction(dual_distance(code) - 1, code.n)
    rate = Fraction(ell, code.n)
    if rate > 1 - rho:
        raise CodeError(f"rate {rate} exceeds 1 - rho = {1 - rho}")

    notes = []
    if code.name.startswith('hamming') and rho < Fraction(1, 2):
        notes.append(f"rho = (d_dual - 1)/n = {rho} from the dual distance; "
                     f"the Hamming/Simplex family is sometimes quoted as tolerating 1/2")
    wt = CosetWtCode(code=code, coset_map=coset_map, labels=label_matrix(code, coset_map),
                     rho=rho, epsilon=Fraction(epsilon), notes=tuple(notes))
    logger.debug(f"wiretap code over {code.name}: n={wt.n} ell={ell} rho={rho}")
    return wt


def wt_encode_batch(wt: CosetWtCode, messages: np.ndarray, randomness: np.ndarray) -> np.ndarray:
    field = wt.field
    words = batch_mat_mul(field, messages, wt.coset_map.data)
    if wt.randomness_dim:
        words = words ^ batch_mat_mul(field, randomness, wt.code.generator.data)
    return words


def wt_decode_batch(wt: CosetWtCode, words: np.ndarray) -> np.ndarray:
    return coset_labels(wt.code, words, wt.labels)


def wt_encode(wt: CosetWtCode, m: FieldVector, R: FieldVector) -> FieldVector:
    """[R m]·[G; Ĝ]."""
    if len(m) != wt.ell:
        raise DimensionError(f"message length {len(m)} != ell={wt.ell}")
    if len(R) != wt.randomness_dim:
        raise DimensionError(f"randomness length {len(R)} != {wt.randomness_dim}")
    word = wt_encode_batch(wt, m.elems[None, :], R.elems[None, :])[0]
    return FieldVector(wt.field, word)


def wt_decode(wt: CosetWtCode, x: FieldVector) -> FieldVector:
    if len(x) != wt.n:
        raise DimensionError(f"word length {len(x)} != n={wt.n}")
    return FieldVector(wt.field, wt_decode_batch(wt, x.elems[None, :])[0])


def coset_words(wt: CosetWtCode, message: np.ndarray) -> np.ndarray:
    """All q^(n-ℓ) encodings of one message, in randomness-lexicographic order."""
    randomness = enumerate_vectors(wt.field, wt.randomness_dim)
    messages = np.broadcast_to(message, (randomness.shape[0], wt.ell))
    return wt_encode_batch(wt, messages, randomness)


# --- privacy verification ---

@dataclass
class PrivacyReport:
    """Max SD(Enc(m0)_S; Enc(m1)_S) over message pairs and reading sets."""

    mode: str
    max_set_size: int
    max_sd: float
    exact_max_sd: Optional[Fraction]
    witness: Optional[Tuple[Tuple[int, ...], str, str]]
    per_size: Dict[int, float]
    rows: List[Tuple[Tuple[int, ...], str, str, str]] = dc_field(default_factory=list)
    half_width: float = 0.0
    sets_checked: int = 0
    seed: Optional[int] = None
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {
            'mode': self.mode,
            'max_set_size': self.max_set_size,
            'max_sd': str(self.exact_max_sd) if self.exact_max_sd is not None else self.max_sd,
            'half_width': self.half_width,
            'per_size': {str(s): v for s, v in sorted(self.per_size.items())},
            'witness': None if self.witness is None else {
                'set': list(self.witness[0]), 'm0': self.witness[1], 'm1': self.witness[2],
            },
            'sets_checked': self.sets_checked,
            'seed': self.seed,
            'notes': list(self.notes),
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['set', 'm0', 'm1', 'sd'])
        for reading_set, m0, m1, sd in self.rows:
            writer.writerow([' '.join(str(i) for i in reading_set), m0, m1, sd])
        return out.getvalue()


def _label(field, digits: np.ndarray) -> str:
    return FieldVector(field, digits).to_text()


def worst_pair_distance(field, words: np.ndarray, reading_set: Tuple[int, ...]):
    """
    Worst message pair for one reading set, from a full (message,
    randomness, n) table of encodings. Returns (SD, m0 row, m1 row).
    """
    n_msg, n_rand, _ = words.shape
    if not reading_set:
        return Fraction(0), 0, 1 if n_msg > 1 else 0
    proj = pack_digits(field, words[:, :, list(reading_set)])
    support = field.q ** len(reading_set)
    flat = proj + (np.arange(n_msg) * support)[:, None]
    hist = np.bincount(flat.ravel(), minlength=n_msg * support).reshape(n_msg, support)
    # pairwise L1 distances between message histograms
    best, best_pair = 0, (0, 1 if n_msg > 1 else 0)
    for m0 in range(n_msg - 1):
        diffs = np.abs(hist[m0 + 1:] - hist[m0][None, :]).sum(axis=1)
        idx = int(np.argmax(diffs))
        if diffs[idx] > best:
            best, best_pair = int(diffs[idx]), (m0, m0 + 1 + idx)
    return Fraction(best, 2 * n_rand), best_pair[0], best_pair[1]


def wt_verify_privacy(wt: CosetWtCode, max_set_size: int, mode: str = EXACT,
                      samples: int = 4096, set_samples: int = 64,
                      seed: int = 0) -> PrivacyReport:
    """
    Maximum statistical distance between reading-set projections of two
    messages, over every reading set of size 0..max_set_size.

    Exact mode enumerates the whole (message, randomness) space once and
    visits reading sets in combinatorial order, in parallel chunks merged by
    maximum. Monte Carlo mode draws reading sets, message pairs and
    randomness from `seed`.

    Raises:
        InfeasibleEnumeration: exact mode over more than NMCODE_MAX_ENUMERATION points
    """
    if not 0 <= max_set_size <= wt.n:
        raise DimensionError(f"reading set size must be in 0..{wt.n}")
    if mode == MONTECARLO:
        return _privacy_montecarlo(wt, max_set_size, samples, set_samples, seed)

    field = wt.field
    sets = [s for size in range(max_set_size + 1) for s in combinations(range(wt.n), size)]
    space = field.q ** wt.n
    limit = config['MAX_ENUMERATION']
    if space * max(1, len(sets)) > limit:
        raise InfeasibleEnumeration('wiretap privacy', space * max(1, len(sets)), limit)

    messages = enumerate_vectors(field, wt.ell)
    words = np.stack([coset_words(wt, m) for m in messages])

    def run_chunk(bounds):
        start, stop = bounds
        return [(sets[i],) + worst_pair_distance(wt.field, words, sets[i]) for i in range(start, stop)]

    results = [r for chunk in parallel_map(run_chunk, chunk_ranges(len(sets), 256)) for r in chunk]

    per_size: Dict[int, Fraction] = {}
    rows = []
    best = None
    for reading_set, sd, m0, m1 in results:
        size = len(reading_set)
        per_size[size] = max(per_size.get(size, Fraction(0)), sd)
        rows.append((reading_set, _label(field, messages[m0]), _label(field, messages[m1]), str(sd)))
        if best is None or sd > best[0]:
            best = (sd, reading_set, m0, m1)

    report = PrivacyReport(
        mode=EXACT,
        max_set_size=max_set_size,
        max_sd=float(best[0]),
        exact_max_sd=best[0],
        witness=(best[1], _label(field, messages[best[2]]), _label(field, messages[best[3]])),
        per_size={s: float(v) for s, v in per_size.items()},
        rows=rows,
        sets_checked=len(sets),
        notes=wt.notes,
    )
    logger.info(f"privacy check n={wt.n} |S|<={max_set_size}: max SD {best[0]} over {len(sets)} sets")
    return report


def _privacy_montecarlo(wt: CosetWtCode, max_set_size: int, samples: int,
                        set_samples: int, seed: int) -> PrivacyReport:
    field = wt.field
    rng = np.random.default_rng(seed)
    rows = []
    per_size: Dict[int, float] = {}
    best = (0.0, (), '', '')
    worst_width = 0.0
    for _ in range(set_samples):
        size = int(rng.integers(0, max_set_size + 1))
        reading_set = tuple(sorted(int(i) for i in rng.choice(wt.n, size=size, replace=False)))
        m0 = rng.integers(0, field.q, size=wt.ell, dtype=np.int64)
        m1 = rng.integers(0, field.q, size=wt.ell, dtype=np.int64)
        support = field.q ** size
        hists = []
        for m in (m0, m1):
            randomness = rng.integers(0, field.q, size=(samples, wt.randomness_dim), dtype=np.int64)
            words = wt_encode_batch(wt, np.broadcast_to(m, (samples, wt.ell)), randomness)
            proj = pack_digits(field, words[:, list(reading_set)]) if size else np.zeros(samples, dtype=np.int64)
            hists.append(np.bincount(proj, minlength=support) / samples)
        sd = float(np.abs(hists[0] - hists[1]).sum() / 2)
        worst_width = max(worst_width, 2 * mc_half_width(support, samples))
        per_size[size] = max(per_size.get(size, 0.0), sd)
        rows.append((reading_set, _label(field, m0), _label(field, m1), f"{sd:.6f}"))
        if sd > best[0]:
            best = (sd, reading_set, _label(field, m0), _label(field, m1))
    return PrivacyReport(
        mode=MONTECARLO,
        max_set_size=max_set_size,
        max_sd=best[0],
        exact_max_sd=None,
        witness=best[1:] if best[0] > 0 else None,
        per_size=per_size,
        rows=rows,
        half_width=worst_width,
        sets_checked=set_samples,
        seed=seed,
        notes=wt.notes,
    )
