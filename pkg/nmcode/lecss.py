"""
Linear error-correcting secret sharing (LECSS) as a nested pair C ⊂ C̄.

The outer generator has r + ℓ rows: the first r span the subcode C, the
last ℓ are the message rows. Encoding is [R m]·G; a word decodes to ⊥ when
it is outside C̄, otherwise to the coset label of C it lies in.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, Optional, Tuple

import numpy as np

from . import config
from .errors import CodeError, DimensionError, InfeasibleEnumeration, RankError
from .field_linalg import (
    GF2,
    FieldMatrix,
    FieldVector,
    batch_mat_mul,
    enumerate_vectors,
    pack_digits,
)
from .linear_codes import (
    CoordinateSolver,
    LinearCode,
    code_from_generator,
    dual_distance,
    min_distance,
    syndromes,
)
from .workers import chunk_ranges, parallel_map

logger = logging.getLogger(__name__)

BUILD_RETRIES = 64


@dataclass(frozen=True, eq=False)
class LecssCode:
    outer: LinearCode
    inner_dim: int
    ell: int
    d: int
    t: int
    solver: CoordinateSolver = dc_field(repr=False)
    seed: Optional[int] = None

    @property
    def n(self) -> int:
        return self.outer.n

    @property
    def subcode_generator(self) -> FieldMatrix:
        return FieldMatrix(GF2, self.outer.generator.data[:self.inner_dim])

    def to_dict(self) -> Dict:
        return {'n': self.n, 'ell': self.ell, 'r': self.inner_dim, 'd': self.d, 't': self.t,
                'seed': self.seed}

    def to_text(self) -> str:
        return (self.outer.to_text()
                + f"inner_dim {self.inner_dim}\n"
                + f"(d,t) verified {self.d} {self.t}\n")


def _assemble(generator: FieldMatrix, inner_dim: int, seed: Optional[int]) -> LecssCode:
    ell = generator.rows - inner_dim
    outer = code_from_generator(generator, name=f"lecss n={generator.cols} ell={ell} r={inner_dim}")
    partial = LecssCode(outer=outer, inner_dim=inner_dim, ell=ell, d=0, t=0,
                        solver=CoordinateSolver.for_generator(generator), seed=seed)
    d, t = lecss_verify(partial)
    return LecssCode(outer=outer, inner_dim=inner_dim, ell=ell, d=d, t=t,
                     solver=partial.solver, seed=seed)


def lecss_from_generator(generator: FieldMatrix, inner_dim: int) -> LecssCode:
    """Wrap an explicit nested pair; the first `inner_dim` rows span C."""
    if generator.field != GF2:
        raise CodeError("LECSS codes are binary")
    if not 0 <= inner_dim < generator.rows:
        raise DimensionError(f"inner_dim must be in 0..{generator.rows - 1}")
    return _assemble(generator, inner_dim, seed=None)


def lecss_build_random(n: int, ell: int, r: int, seed: int) -> LecssCode:
    """
    Random full-rank (r+ℓ) x n binary generator, then measure (d, t).

    Raises:
        RankError: no full-rank draw within the retry budget
    """
    if ell < 1 or r < 0 or ell + r > n:
        raise DimensionError(f"need 1 <= ell and ell + r <= n, got n={n} ell={ell} r={r}")
    rng = np.random.default_rng(seed)
    for attempt in range(BUILD_RETRIES):
        data = rng.integers(0, 2, size=(ell + r, n), dtype=np.int64)
        candidate = FieldMatrix(GF2, data)
        if candidate.rank() == ell + r:
            code = _assemble(candidate, r, seed)
            logger.info(f"LECSS n={n} ell={ell} r={r} seed={seed}: d={code.d} t={code.t} "
                        f"(attempt {attempt + 1})")
            return code
    raise RankError(f"no full-rank LECSS generator after {BUILD_RETRIES} draws (seed={seed})")


def lecss_encode_batch(code: LecssCode, messages: np.ndarray, randomness: np.ndarray) -> np.ndarray:
    coeffs = np.hstack([np.asarray(randomness, dtype=np.int64).reshape(len(messages), code.inner_dim),
                        np.asarray(messages, dtype=np.int64)])
    return batch_mat_mul(GF2, coeffs, code.outer.generator.data)


def lecss_decode_batch(code: LecssCode, words: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Coset labels and a membership mask (False = ⊥)."""
    words = np.asarray(words, dtype=np.int64)
    inside = ~syndromes(code.outer, words).any(axis=1)
    labels = code.solver.solve(words)[:, code.inner_dim:]
    return labels, inside


def lecss_encode(code: LecssCode, m: FieldVector, R: FieldVector) -> FieldVector:
    if len(m) != code.ell:
        raise DimensionError(f"message length {len(m)} != ell={code.ell}")
    if len(R) != code.inner_dim:
        raise DimensionError(f"randomness length {len(R)} != r={code.inner_dim}")
    return FieldVector(GF2, lecss_encode_batch(code, m.elems[None, :], R.elems[None, :])[0])


def lecss_decode(code: LecssCode, x: FieldVector) -> Optional[FieldVector]:
    """Coset label of x, or None (⊥) when x is not in C̄."""
    if len(x) != code.n:
        raise DimensionError(f"word length {len(x)} != n={code.n}")
    labels, inside = lecss_decode_batch(code, x.elems[None, :])
    return FieldVector(GF2, labels[0]) if inside[0] else None


def _ensemble(code: LecssCode) -> np.ndarray:
    """Codewords indexed [message, randomness, position]."""
    size = 1 << (code.ell + code.inner_dim)
    if size > config['MAX_ENUMERATION']:
        raise InfeasibleEnumeration('LECSS codeword ensemble', size, config['MAX_ENUMERATION'])
    messages = enumerate_vectors(GF2, code.ell)
    randomness = enumerate_vectors(GF2, code.inner_dim)
    out = np.empty((len(messages), len(randomness), code.n), dtype=np.int64)
    for i, m in enumerate(messages):
        out[i] = lecss_encode_batch(code, np.broadcast_to(m, (len(randomness), code.ell)), randomness)
    return out


def _uniform_on(words: np.ndarray, subset: Tuple[int, ...]) -> bool:
    proj = pack_digits(GF2, words[:, :, list(subset)])
    n_msg, n_rand = proj.shape
    support = 1 << len(subset)
    flat = proj + (np.arange(n_msg) * support)[:, None]
    hist = np.bincount(flat.ravel(), minlength=n_msg * support)
    return bool((hist == n_rand // support).all())


def uniformity(code: LecssCode, words: Optional[np.ndarray] = None) -> int:
    """
    Largest τ such that every τ positions of every message's ensemble are
    uniform on {0,1}^τ; stops at the first τ that fails.
    """
    if words is None:
        words = _ensemble(code)
    t = 0
    for tau in range(1, code.inner_dim + 1):
        subsets = list(combinations(range(code.n), tau))

        def run_chunk(bounds):
            start, stop = bounds
            return all(_uniform_on(words, subsets[i]) for i in range(start, stop))

        if not all(parallel_map(run_chunk, chunk_ranges(len(subsets), 512))):
            break
        t = tau
    return t


def lecss_verify(code: LecssCode) -> Tuple[int, int]:
    """
    Measure (d, t): d by exhaustive weight sweep of C̄, t by projection
    uniformity.

    Raises:
        InfeasibleEnumeration: 2^(ℓ+r) beyond NMCODE_MAX_ENUMERATION
    """
    words = _ensemble(code)
    weights = words.reshape(-1, code.n).sum(axis=1)
    d = int(weights[1:].min()) if weights.size > 1 else code.n + 1
    return d, uniformity(code, words)


def subcode(code: LecssCode) -> LinearCode:
    return code_from_generator(code.subcode_generator, name=f"subcode({code.outer.name})")


def cross_check(code: LecssCode) -> Dict:
    """Compare t against (dual distance of C) - 1 and d against the code's own sweep."""
    sub_dual = dual_distance(subcode(code)) if code.inner_dim else 1
    expected_t = sub_dual - 1
    report = {
        't': code.t,
        'subcode_dual_distance': sub_dual,
        't_agrees': code.t == expected_t,
        'd': code.d,
        'outer_min_distance': min_distance(code.outer),
        'd_agrees': code.d == min_distance(code.outer),
    }
    if not report['t_agrees']:
        logger.warning(f"LECSS t={code.t} differs from subcode dual distance - 1 = {expected_t}")
    return report


def check_definition(code: LecssCode, pair_limit: int = 1 << 16, seed: int = 0) -> Dict:
    """
    Exhaustive d-distance clause (every nonzero word lighter than d decodes
    to ⊥) and the linearity clause over codeword pairs (all pairs when
    there are at most `pair_limit`, otherwise that many seeded draws).
    """
    if code.n > 20:
        raise InfeasibleEnumeration('LECSS word space', 1 << code.n, 1 << 20)
    space = enumerate_vectors(GF2, code.n)
    light = space[(space.sum(axis=1) < code.d) & space.any(axis=1)]
    _, inside = lecss_decode_batch(code, light)
    distance_ok = not inside.any()

    words = _ensemble(code).reshape(-1, code.n)
    count = len(words)
    if count * count <= pair_limit:
        left = np.repeat(np.arange(count), count)
        right = np.tile(np.arange(count), count)
    else:
        rng = np.random.default_rng(seed)
        left = rng.integers(0, count, size=pair_limit)
        right = rng.integers(0, count, size=pair_limit)
    lab_l, ok_l = lecss_decode_batch(code, words[left])
    lab_r, ok_r = lecss_decode_batch(code, words[right])
    lab_s, ok_s = lecss_decode_batch(code, words[left] ^ words[right])
    linear_ok = bool(ok_l.all() and ok_r.all() and ok_s.all()
                     and np.array_equal(lab_s, lab_l ^ lab_r))
    return {'distance_clause': distance_ok, 'linearity_clause': linear_ok, 'pairs': int(len(left))}
