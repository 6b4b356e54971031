"""
The two modular non-malleable code constructions and their tampering
experiments.

Construction 1 is LECSSenc(AMDenc(m)) with decoder AMDdec(LECSSdec(x));
Construction 2 is WTenc(AMDenc(m)) with decoder AMDdec(WTdec(x)). Over
GF(2^w) with w > 1 the AMD word is zero-padded and packed into the ℓ wire
symbols. All encoder randomness is explicit: one index per draw, covering
the AMD tag randomness r (outer digit) and the inner-code randomness R.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Union

import numpy as np

from . import config
from .amd import (
    AmdCode,
    amd_build,
    amd_decode_batch,
    amd_encode_batch,
    message_bits,
    pack_codewords,
    unpack_codewords,
)
from .bounds import Regime, c1_regime, c1_security, c2_regime, c2_security
from .errors import CodeError, DimensionError, InfeasibleEnumeration
from .field_linalg import GF2, FieldSpec, FieldVector, pack_digits
from .lecss import LecssCode, lecss_decode_batch, lecss_encode_batch
from .linear_codes import extended_hamming_code, hamming_code
from .outcomes import (
    EXACT,
    Outcome,
    OutcomeDistribution,
    bot_index,
    patch,
    same_index,
    statistical_distance,
)
from .tamper import AoTamperFunction, TamperFunction, ao_apply, tamper_apply
from .wiretap import CosetWtCode, wt_build, wt_decode_batch, wt_encode_batch
from .workers import chunk_ranges, parallel_reduce

logger = logging.getLogger(__name__)

CONSTRUCTION1 = 'construction1'
CONSTRUCTION2 = 'construction2'

MONTECARLO = 'montecarlo'
CHUNK = 1 << 16

Tamper = Union[TamperFunction, AoTamperFunction]


@dataclass(frozen=True, eq=False)
class NmCode:
    kind: str
    amd: AmdCode
    inner: Union[LecssCode, CosetWtCode]
    claimed_security: Union[Fraction, float]
    regime: Regime
    name: str = ''

    @property
    def k(self) -> int:
        return self.amd.k

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def field(self) -> FieldSpec:
        return GF2 if self.kind == CONSTRUCTION1 else self.inner.field

    @property
    def inner_randomness_dim(self) -> int:
        return self.inner.inner_dim if self.kind == CONSTRUCTION1 else self.inner.randomness_dim

    @property
    def inner_randomness_size(self) -> int:
        return self.field.q ** self.inner_randomness_dim

    @property
    def randomness_size(self) -> int:
        return (1 << self.amd.u) * self.inner_randomness_size

    def split_randomness(self, indices: np.ndarray):
        """Randomness index -> (AMD r, inner R digits)."""
        indices = np.asarray(indices, dtype=np.int64)
        inner_size = self.inner_randomness_size
        amd_r = indices // inner_size
        inner = indices % inner_size
        digits = np.zeros((indices.size, self.inner_randomness_dim), dtype=np.int64)
        q = self.field.q
        for j in range(self.inner_randomness_dim - 1, -1, -1):
            digits[:, j] = inner % q
            inner = inner // q
        return amd_r, digits

    def encode_batch(self, messages: np.ndarray, amd_r: np.ndarray, inner_r: np.ndarray) -> np.ndarray:
        amd_words = amd_encode_batch(self.amd, messages, amd_r)
        if self.kind == CONSTRUCTION1:
            return lecss_encode_batch(self.inner, amd_words, inner_r)
        inner_msg = pack_codewords(self.amd, amd_words, self.field, self.inner.ell)
        return wt_encode_batch(self.inner, inner_msg, inner_r)

    def encode_indices(self, message_index: int, rand_indices: np.ndarray) -> np.ndarray:
        amd_r, inner_r = self.split_randomness(rand_indices)
        messages = np.broadcast_to(np.array(message_bits(self.k, message_index), dtype=np.int64),
                                   (len(amd_r), self.k))
        return self.encode_batch(messages, amd_r, inner_r)

    def decode_batch(self, words: np.ndarray) -> np.ndarray:
        """Outcome indices (message index, or ⊥)."""
        words = np.asarray(words, dtype=np.int64)
        if self.kind == CONSTRUCTION1:
            labels, ok = lecss_decode_batch(self.inner, words)
            amd_words = labels
        else:
            labels = wt_decode_batch(self.inner, words)
            amd_words, ok = unpack_codewords(self.amd, labels, self.field)
        messages, accepted = amd_decode_batch(self.amd, amd_words)
        return np.where(ok & accepted, pack_digits(GF2, messages), bot_index(self.k))

    def to_dict(self) -> Dict:
        inner = self.inner.to_dict()
        return {
            'construction': self.kind,
            'name': self.name,
            'n': self.n,
            'k': self.k,
            'q': self.field.q,
            'amd': self.amd.to_dict(),
            'inner': inner,
        }


def construction1(lecss: LecssCode, amd: AmdCode, rho_r=0, rho_w=1) -> NmCode:
    """LECSS ∘ AMD; the AMD word must be exactly the LECSS message."""
    if amd.length != lecss.ell:
        raise CodeError(f"AMD word length {amd.length} != LECSS message length {lecss.ell}")
    regime = c1_regime(lecss.t, lecss.d, lecss.n, rho_r, rho_w)
    security = c1_security(amd.delta, lecss.t, lecss.d, lecss.n, rho_r)
    return NmCode(kind=CONSTRUCTION1, amd=amd, inner=lecss, claimed_security=security,
                  regime=regime, name=f"c1 n={lecss.n} k={amd.k}")


def construction2(wt: CosetWtCode, amd: AmdCode, rho_r=0, rho_w=0) -> NmCode:
    """WT ∘ AMD with claimed security 2ε + δ."""
    if wt.field.w == 1:
        if amd.length != wt.ell:
            raise CodeError(f"AMD word length {amd.length} != wiretap message length {wt.ell}")
    elif amd.length > wt.ell * wt.field.w:
        raise CodeError(f"AMD word of {amd.length} bits does not fit {wt.ell} symbols of GF({wt.field.q})")
    regime = c2_regime(wt.rho, rho_r, rho_w)
    if not regime.guaranteed:
        regime.notes.append('bound not guaranteed by the construction theorems at these parameters')
    return NmCode(kind=CONSTRUCTION2, amd=amd, inner=wt, claimed_security=c2_security(wt.epsilon, amd.delta),
                  regime=regime, name=f"c2 n={wt.n} k={amd.k} q={wt.field.q}")


def hamming_construction2(h: int, k: int = 1, u: int = 2, seed: int = 0, extended: bool = False,
                          rho_r=0, rho_w=0) -> NmCode:
    """The explicit family: Hamming (or extended Hamming) coset code with a matching AMD."""
    code = extended_hamming_code(h) if extended else hamming_code(h)
    wt = wt_build(code, seed)
    return construction2(wt, amd_build(k, u), rho_r=rho_r, rho_w=rho_w)


@dataclass(frozen=True)
class IdentityCode:
    """
    The trivial 1-bit scheme Enc(m) = m, Dec(x) = x. It is not private at
    all, which makes it the target of the privacy-breaker check.
    """

    k: int = 1
    n: int = 1
    randomness_size: int = 1
    claimed_security: Fraction = Fraction(0)
    field: FieldSpec = GF2

    def encode_indices(self, message_index: int, rand_indices: np.ndarray) -> np.ndarray:
        return np.full((len(rand_indices), 1), message_index, dtype=np.int64)

    def decode_batch(self, words: np.ndarray) -> np.ndarray:
        return np.asarray(words, dtype=np.int64)[:, 0]

    def to_dict(self) -> Dict:
        return {'construction': 'identity', 'n': 1, 'k': 1}


def nm_encode(code: NmCode, m: FieldVector, amd_r: int, inner_r: FieldVector) -> FieldVector:
    """
    Encode with explicit randomness.

    Args:
        code: The composed scheme
        m: k message bits
        amd_r: AMD tag randomness in GF(2^u)
        inner_r: Inner-code randomness (r bits for LECSS, n-ℓ symbols for WT)

    Returns:
        Codeword of length n
    """
    if len(m) != code.k:
        raise DimensionError(f"message length {len(m)} != k={code.k}")
    if len(inner_r) != code.inner_randomness_dim:
        raise DimensionError(f"inner randomness length {len(inner_r)} != {code.inner_randomness_dim}")
    word = code.encode_batch(m.elems[None, :], np.array([code.amd.field.check(amd_r)]),
                             inner_r.elems[None, :])[0]
    return FieldVector(code.field, word)


def nm_decode(code: NmCode, x: FieldVector) -> Outcome:
    if len(x) != code.n:
        raise DimensionError(f"word length {len(x)} != n={code.n}")
    return Outcome.from_index(code.k, int(code.decode_batch(x.elems[None, :])[0]))


# --- experiments ---

def _enumeration_limit(code, what: str) -> None:
    limit = config['MAX_ENUMERATION']
    if code.randomness_size > limit:
        raise InfeasibleEnumeration(what, code.randomness_size, limit)


def _experiment_counts(code, f: Tamper, message_index: int, rand_indices: np.ndarray,
                       strong: bool) -> np.ndarray:
    words = code.encode_indices(message_index, rand_indices)
    tampered = f.apply_batch(words)
    outcomes = code.decode_batch(tampered)
    if strong:
        unchanged = (tampered == words).all(axis=1)
        outcomes = np.where(unchanged, same_index(code.k), outcomes)
    return np.bincount(outcomes, minlength=(1 << code.k) + 2)


def _run_experiment(code, f: Tamper, message_index: int, mode: str, samples: int,
                    seed: int, strong: bool) -> OutcomeDistribution:
    if not 0 <= message_index < (1 << code.k):
        raise DimensionError(f"message index {message_index} outside 0..{(1 << code.k) - 1}")
    size = (1 << code.k) + 2
    if mode == MONTECARLO:
        rng = np.random.default_rng(seed)
        chunks = chunk_ranges(samples, CHUNK)
        seeds = rng.integers(0, 1 << 62, size=len(chunks))

        def sample_chunk(i):
            start, stop = chunks[i]
            draws = np.random.default_rng(int(seeds[i])).integers(0, code.randomness_size, size=stop - start)
            return _experiment_counts(code, f, message_index, draws, strong)

        counts = parallel_reduce(sample_chunk, range(len(chunks)), np.add, np.zeros(size, dtype=np.int64))
        return OutcomeDistribution.empirical(code.k, counts)

    _enumeration_limit(code, 'tampering experiment randomness')

    def enum_chunk(bounds):
        start, stop = bounds
        return _experiment_counts(code, f, message_index, np.arange(start, stop, dtype=np.int64), strong)

    counts = parallel_reduce(enum_chunk, chunk_ranges(code.randomness_size, CHUNK), np.add,
                             np.zeros(size, dtype=np.int64))
    return OutcomeDistribution.exact_from_counts(code.k, counts, code.randomness_size)


def tamper_experiment(code, f: Tamper, message_index: int, mode: str = EXACT,
                      samples: int = 100_000, seed: int = 0) -> OutcomeDistribution:
    """
    Distribution of Dec(f(Enc(m))) over the encoder randomness: exact by
    enumerating every randomness index, or empirical from `samples` draws.

    Raises:
        InfeasibleEnumeration: exact mode beyond NMCODE_MAX_ENUMERATION
    """
    return _run_experiment(code, f, message_index, mode, samples, seed, strong=False)


def strong_experiment(code, f: Tamper, message_index: int, mode: str = EXACT,
                      samples: int = 100_000, seed: int = 0) -> OutcomeDistribution:
    """As `tamper_experiment`, but codewords left unchanged by f yield same*."""
    return _run_experiment(code, f, message_index, mode, samples, seed, strong=True)


def tamper_experiment_reference(code: NmCode, f: Tamper, message_index: int) -> OutcomeDistribution:
    """Slow per-draw path through the scalar encode/tamper/decode functions."""
    _enumeration_limit(code, 'reference experiment randomness')
    m = FieldVector(GF2, message_bits(code.k, message_index))
    counts = [0] * ((1 << code.k) + 2)
    for index in range(code.randomness_size):
        amd_r, inner_r = code.split_randomness(np.array([index]))
        x = nm_encode(code, m, int(amd_r[0]), FieldVector(code.field, inner_r[0]))
        x_t = tamper_apply(f, x) if isinstance(f, TamperFunction) else ao_apply(f, x)
        counts[nm_decode(code, x_t).index(code.k)] += 1
    return OutcomeDistribution.exact_from_counts(code.k, counts, code.randomness_size)


def strong_implies_nm_check(code, f: Tamper, messages: Optional[List[int]] = None) -> Dict:
    """
    If the strong distributions of all messages are pairwise ε-close, the
    strong distribution of any single message works as D_f within 2ε.
    """
    messages = list(range(1 << code.k)) if messages is None else messages
    strong = {m: strong_experiment(code, f, m) for m in messages}
    eps = max((statistical_distance(strong[a], strong[b]) for a in messages for b in messages if a < b),
              default=Fraction(0))
    simulator = strong[messages[0]]
    worst = Fraction(0)
    for m in messages:
        sd = statistical_distance(tamper_experiment(code, f, m), patch(simulator, m))
        worst = max(worst, sd)
    return {'strong_epsilon': eps, 'nm_distance': worst, 'holds': worst <= 2 * eps}


def agreement_check(code, f: Tamper, message_index: int, samples: int, seed: int) -> Dict:
    """Exact vs. Monte Carlo: every outcome frequency within 3 binomial sigmas."""
    exact = tamper_experiment(code, f, message_index)
    empirical = tamper_experiment(code, f, message_index, mode=MONTECARLO, samples=samples, seed=seed)
    worst = 0.0
    agrees = True
    for i in range(exact.size):
        p = float(exact.probability(i))
        p_hat = empirical.probability(i)
        sigma = math.sqrt(p * (1 - p) / samples)
        deviation = abs(p_hat - p)
        worst = max(worst, deviation)
        if deviation > 3 * sigma + 1e-12:
            agrees = False
    return {'agrees': agrees, 'max_deviation': worst, 'samples': samples}

