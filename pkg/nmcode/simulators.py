"""
Simulator distributions D_f for both constructions.

The simulators see only the code and the tampering function, never the
message. Construction 2 (binary or q-ary) walks Y = WTenc(0) and splits on
the number of overwrites outside the read set; Construction 1 averages
over uniform read values and splits into four overwrite regimes.
"""

from __future__ import annotations

import hashlib
import json
import logging
from fractions import Fraction
from typing import Dict, List

import numpy as np

from . import config
from .bounds import appendix_bound
from .errors import DimensionError, InfeasibleEnumeration, RegimeError
from .field_linalg import GF2, enumerate_vectors
from .lecss import lecss_decode_batch
from .nmc import CONSTRUCTION1, CONSTRUCTION2, MONTECARLO, NmCode, Tamper
from .outcomes import (
    EXACT,
    OutcomeDistribution,
    bot_index,
    mixture,
    same_index,
)
from .tamper import (
    OVERWRITE,
    AoTamperFunction,
    TamperFunction,
    apply_actions,
    difference_actions,
    is_overwrite,
)
from .wiretap import wt_decode_batch, wt_encode_batch
from .workers import chunk_ranges, parallel_reduce

logger = logging.getLogger(__name__)

CHUNK = 1 << 16


def _outside_read(f: Tamper) -> np.ndarray:
    mask = np.ones(f.n, dtype=bool)
    mask[list(f.read_set)] = False
    return mask


def _binary_full_actions(f: TamperFunction, words: np.ndarray) -> np.ndarray:
    """(N, n) action codes, Keep outside S_w."""
    actions = np.full(words.shape, 2, dtype=np.int64)
    if f.write_set:
        actions[:, list(f.write_set)] = f.actions_for_reads(words[:, list(f.read_set)])
    return actions


# --- Construction 2 ---

def _c2_chunk_counts(code: NmCode, f: Tamper, randomness: np.ndarray) -> np.ndarray:
    wt = code.inner
    y = wt_encode_batch(wt, np.zeros((len(randomness), wt.ell), dtype=np.int64), randomness)
    outside = _outside_read(f)
    if isinstance(f, AoTamperFunction):
        kinds, values = f.actions_for_reads(y[:, list(f.read_set)])
        overwrites = (kinds == OVERWRITE) & outside[None, :]
        delta = np.where(kinds == OVERWRITE, values ^ y, values)
        tampered = np.where(kinds == OVERWRITE, values, y ^ values)
    else:
        actions = _binary_full_actions(f, y)
        overwrites = is_overwrite(actions) & outside[None, :]
        delta = apply_actions(difference_actions(actions), y)
        tampered = apply_actions(actions, y)

    few = overwrites.sum(axis=1) <= outside.sum() / 2
    same = ~wt_decode_batch(wt, delta).any(axis=1)
    case1 = np.where(same, same_index(code.k), bot_index(code.k))
    case2 = code.decode_batch(tampered)
    outcomes = np.where(few, case1, case2)
    return np.bincount(outcomes, minlength=(1 << code.k) + 2)


def simulator_c2(code: NmCode, f: Tamper, mode: str = EXACT, samples: int = 100_000,
                 seed: int = 0) -> OutcomeDistribution:
    """
    D_f for Construction 2, weighted by Pr[Y_{S_r} = α] with Y = WTenc(0).

    For each y in the support of Y with read value α: when at most half of
    the positions outside S_r are overwritten, emit same* if Δg^α(y) decodes
    to the zero label and ⊥ otherwise; else emit Dec(g^α(y)).
    """
    if code.kind != CONSTRUCTION2:
        raise DimensionError("simulator_c2 needs a Construction 2 code")
    wt = code.inner
    size = (1 << code.k) + 2
    q, dim = wt.field.q, wt.randomness_dim

    if mode == MONTECARLO:
        rng = np.random.default_rng(seed)
        chunks = chunk_ranges(samples, CHUNK)
        seeds = rng.integers(0, 1 << 62, size=len(chunks))

        def sample_chunk(i):
            start, stop = chunks[i]
            draws = np.random.default_rng(int(seeds[i])).integers(0, q, size=(stop - start, dim), dtype=np.int64)
            return _c2_chunk_counts(code, f, draws)

        counts = parallel_reduce(sample_chunk, range(len(chunks)), np.add, np.zeros(size, dtype=np.int64))
        return OutcomeDistribution.empirical(code.k, counts)

    total = q ** dim
    if total > config['MAX_ENUMERATION']:
        raise InfeasibleEnumeration('simulator randomness', total, config['MAX_ENUMERATION'])

    def enum_chunk(bounds):
        start, stop = bounds
        return _c2_chunk_counts(code, f, enumerate_vectors(wt.field, dim, start, stop))

    counts = parallel_reduce(enum_chunk, chunk_ranges(total, CHUNK), np.add, np.zeros(size, dtype=np.int64))
    return OutcomeDistribution.exact_from_counts(code.k, counts, total)


# --- Construction 1 ---

def _assignments(positions: List[int], n: int, base: np.ndarray) -> np.ndarray:
    """All 2^|positions| words equal to `base` except on `positions`."""
    fill = enumerate_vectors(GF2, len(positions))
    words = np.broadcast_to(base, (len(fill), n)).copy()
    if positions:
        words[:, positions] = fill
    return words


def c1_case(code: NmCode, overwrites_outside: int, reads: int) -> int:
    """1: few overwrites, 2-3: middle range (output ⊥), 4: almost everything overwritten."""
    t, n = code.inner.t, code.n
    if overwrites_outside <= t - reads:
        return 1
    if overwrites_outside >= n - t:
        return 4
    return 2


def _c1_alpha(code: NmCode, f: TamperFunction, alpha: int) -> OutcomeDistribution:
    n, k = code.n, code.k
    read = list(f.read_set)
    base = np.zeros(n, dtype=np.int64)
    if read:
        base[read] = [(alpha >> (len(read) - 1 - j)) & 1 for j in range(len(read))]
    actions = f.full_actions(alpha)
    outside = _outside_read(f)
    overwritten = is_overwrite(actions) & outside
    case = c1_case(code, int(overwritten.sum()), len(read))

    if case == 2:
        return OutcomeDistribution.point(k, bot_index(k))
    if case == 1:
        words = _assignments([int(i) for i in np.nonzero(overwritten)[0]], n, base)
        z = apply_actions(difference_actions(actions)[None, :], words)
        labels, inside = lecss_decode_batch(code.inner, z)
        same = inside & ~labels.any(axis=1)
        outcomes = np.where(same, same_index(k), bot_index(k))
    else:
        free = [int(i) for i in np.nonzero(outside & ~overwritten)[0]]
        words = _assignments(free, n, base)
        outcomes = code.decode_batch(apply_actions(actions[None, :], words))
    counts = np.bincount(outcomes, minlength=(1 << k) + 2)
    return OutcomeDistribution.exact_from_counts(k, counts, len(outcomes))


def _check_c1_regime(code: NmCode, f: TamperFunction) -> None:
    if code.kind != CONSTRUCTION1:
        raise DimensionError("simulator_c1 needs a Construction 1 code")
    if not isinstance(f, TamperFunction):
        raise DimensionError("simulator_c1 takes a binary tampering function")
    if code.inner.t <= f.reads:
        raise RegimeError(f"outside regime: t' = {code.inner.t} <= |S_r| = {f.reads}")
    if f.reads > 20:
        raise InfeasibleEnumeration('read values', 1 << f.reads, 1 << 20)


def simulator_c1(code: NmCode, f: TamperFunction) -> OutcomeDistribution:
    """
    D_f for Construction 1: the uniform average over α in {0,1}^|S_r| of

      case 1 (n_ow <= t' - |S_r|): same* if LECSSdec(Δg^α(x)) = 0^ℓ, else ⊥,
          with x uniform on the overwritten positions and α on S_r;
      cases 2-3: ⊥;
      case 4 (n_ow >= n - t'): Dec(g^α(y)) with y uniform on the positions
          outside S_r that are not overwritten.

    Raises:
        RegimeError: t' <= |S_r|
    """
    _check_c1_regime(code, f)
    weight = Fraction(1, 1 << f.reads)
    parts = [(weight, _c1_alpha(code, f, alpha)) for alpha in range(1 << f.reads)]
    return mixture(code.k, parts)


def c1_case_failure(code: NmCode, f: TamperFunction, message_index: int) -> Dict:
    """
    Mass of the real experiment that lands in cases 2-3 and still decodes
    to a message, next to the failure bound for those cases.
    """
    _check_c1_regime(code, f)
    total = code.randomness_size
    if total > config['MAX_ENUMERATION']:
        raise InfeasibleEnumeration('experiment randomness', total, config['MAX_ENUMERATION'])
    outside = _outside_read(f)
    cases = np.array([
        c1_case(code, int((is_overwrite(f.full_actions(a)) & outside).sum()), f.reads)
        for a in range(1 << f.reads)
    ])
    words = code.encode_indices(message_index, np.arange(total, dtype=np.int64))
    alphas = (words[:, list(f.read_set)] @ (1 << np.arange(f.reads - 1, -1, -1))) if f.reads \
        else np.zeros(total, dtype=np.int64)
    middle = cases[alphas] == 2
    decoded = code.decode_batch(f.apply_batch(words))
    undetected = int((middle & (decoded != bot_index(code.k))).sum())
    rho_r = Fraction(f.reads, code.n)
    return {
        'mass': Fraction(undetected, total),
        'bound': appendix_bound(code.inner.t, code.inner.d, code.n, rho_r),
        'middle_mass': Fraction(int(middle.sum()), total),
    }


def simulate(code: NmCode, f: Tamper, mode: str = EXACT, samples: int = 100_000,
             seed: int = 0) -> OutcomeDistribution:
    """Dispatch to the construction's simulator (Construction 1 is always exact)."""
    if code.kind == CONSTRUCTION1:
        return simulator_c1(code, f)
    return simulator_c2(code, f, mode=mode, samples=samples, seed=seed)


def simulator_digest(dist: OutcomeDistribution) -> str:
    payload = json.dumps(dist.to_dict(), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]
