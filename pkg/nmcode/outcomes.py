"""
Decoder outcomes and distributions over them.

An outcome is a k-bit message, ⊥ or same*. Outcomes are indexed
0..2^k-1 for messages (first bit most significant), 2^k for ⊥ and 2^k+1
for same*. Exact distributions hold rational masses; empirical ones hold
sample counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, ModeMismatch

EXACT = 'exact'
EMPIRICAL = 'empirical'

Number = Union[Fraction, float]


def bot_index(k: int) -> int:
    return 1 << k


def same_index(k: int) -> int:
    return (1 << k) + 1


@dataclass(frozen=True)
class Outcome:
    """Message(bits) | Bot | SameStar."""

    kind: str
    message: Optional[Tuple[int, ...]] = None

    @classmethod
    def of_message(cls, bits: Iterable[int]) -> 'Outcome':
        return cls('message', tuple(int(b) for b in bits))

    @classmethod
    def bot(cls) -> 'Outcome':
        return cls('bot')

    @classmethod
    def same(cls) -> 'Outcome':
        return cls('same')

    @classmethod
    def from_index(cls, k: int, index: int) -> 'Outcome':
        if index == bot_index(k):
            return cls.bot()
        if index == same_index(k):
            return cls.same()
        return cls.of_message((index >> (k - 1 - j)) & 1 for j in range(k))

    def index(self, k: int) -> int:
        if self.kind == 'bot':
            return bot_index(k)
        if self.kind == 'same':
            return same_index(k)
        if len(self.message) != k:
            raise DimensionError(f"message outcome has {len(self.message)} bits, expected {k}")
        value = 0
        for bit in self.message:
            value = (value << 1) | bit
        return value

    def label(self) -> str:
        if self.kind == 'bot':
            return 'bot'
        if self.kind == 'same':
            return 'same*'
        return ''.join(str(b) for b in self.message)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """
    Mass over the 2^k + 2 outcomes.

    In exact mode `masses` are Fractions summing to 1. In empirical mode
    `counts` holds per-outcome sample counts and `samples` their total.
    """

    k: int
    mode: str
    masses: Tuple[Fraction, ...] = ()
    counts: Tuple[int, ...] = ()
    samples: int = 0

    @property
    def size(self) -> int:
        return (1 << self.k) + 2

    @classmethod
    def exact_from_counts(cls, k: int, counts: Sequence[int], total: int) -> 'OutcomeDistribution':
        counts = [int(c) for c in counts]
        if len(counts) != (1 << k) + 2:
            raise DimensionError(f"expected {(1 << k) + 2} outcome counts, got {len(counts)}")
        if sum(counts) != total or total <= 0:
            raise DimensionError(f"outcome counts sum to {sum(counts)}, expected {total}")
        return cls(k=k, mode=EXACT, masses=tuple(Fraction(c, total) for c in counts))

    @classmethod
    def exact_from_masses(cls, k: int, masses: Sequence[Fraction]) -> 'OutcomeDistribution':
        masses = tuple(Fraction(m) for m in masses)
        if len(masses) != (1 << k) + 2:
            raise DimensionError(f"expected {(1 << k) + 2} masses, got {len(masses)}")
        if sum(masses) != 1:
            raise DimensionError(f"masses sum to {sum(masses)}, not 1")
        return cls(k=k, mode=EXACT, masses=masses)

    @classmethod
    def empirical(cls, k: int, counts: Sequence[int]) -> 'OutcomeDistribution':
        counts = tuple(int(c) for c in counts)
        if len(counts) != (1 << k) + 2:
            raise DimensionError(f"expected {(1 << k) + 2} outcome counts, got {len(counts)}")
        return cls(k=k, mode=EMPIRICAL, counts=counts, samples=sum(counts))

    @classmethod
    def point(cls, k: int, index: int) -> 'OutcomeDistribution':
        masses = [Fraction(0)] * ((1 << k) + 2)
        masses[index] = Fraction(1)
        return cls(k=k, mode=EXACT, masses=tuple(masses))

    def probability(self, index: int) -> Number:
        if self.mode == EXACT:
            return self.masses[index]
        return self.counts[index] / self.samples

    def prob(self, outcome: Outcome) -> Number:
        return self.probability(outcome.index(self.k))

    def as_floats(self) -> np.ndarray:
        if self.mode == EXACT:
            return np.array([float(m) for m in self.masses])
        return np.array(self.counts, dtype=float) / self.samples

    def half_width(self) -> float:
        """3-sigma binomial half-width of the plug-in SD contribution (0 if exact)."""
        if self.mode == EXACT:
            return 0.0
        return mc_half_width(self.size, self.samples)

    def support(self) -> Dict[str, Number]:
        return {Outcome.from_index(self.k, i).label(): self.probability(i)
                for i in range(self.size) if self.probability(i)}

    def to_dict(self) -> Dict:
        if self.mode == EXACT:
            support = {label: str(p) for label, p in self.support().items()}
        else:
            support = {Outcome.from_index(self.k, i).label(): c
                       for i, c in enumerate(self.counts) if c}
        out = {'k': self.k, 'mode': self.mode, 'support': support}
        if self.mode == EMPIRICAL:
            out['samples'] = self.samples
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, OutcomeDistribution) and self.k == other.k
                and self.mode == other.mode and self.masses == other.masses
                and self.counts == other.counts)

    def __hash__(self) -> int:
        return hash((self.k, self.mode, self.masses, self.counts))

    def __repr__(self) -> str:
        return f"OutcomeDistribution({self.mode}, {self.support()})"


def mc_half_width(support: int, samples: int) -> float:
    """3·sqrt(K / 4N) bound on the plug-in SD error of one empirical distribution."""
    if samples <= 0:
        return 1.0
    return 3.0 * math.sqrt(support / (4.0 * samples))


def statistical_distance(p: OutcomeDistribution, q: OutcomeDistribution,
                         allow_mixed: bool = False) -> Number:
    """
    Half the L1 distance. Exact inputs give a Fraction, empirical a float.

    Raises:
        ModeMismatch: exact vs. empirical without allow_mixed
    """
    if p.k != q.k:
        raise DimensionError(f"outcome spaces differ: k={p.k} vs k={q.k}")
    if p.mode == q.mode == EXACT:
        return sum((abs(a - b) for a, b in zip(p.masses, q.masses)), Fraction(0)) / 2
    if p.mode != q.mode and not allow_mixed:
        raise ModeMismatch("cannot compare exact and empirical distributions without allow_mixed")
    return float(np.abs(p.as_floats() - q.as_floats()).sum() / 2)


def patch(dist: OutcomeDistribution, message_index: int) -> OutcomeDistribution:
    """Move the same* mass onto the given message."""
    k = dist.k
    same = same_index(k)
    if dist.mode == EXACT:
        masses = list(dist.masses)
        masses[message_index] += masses[same]
        masses[same] = Fraction(0)
        return OutcomeDistribution(k=k, mode=EXACT, masses=tuple(masses))
    counts = list(dist.counts)
    counts[message_index] += counts[same]
    counts[same] = 0
    return OutcomeDistribution(k=k, mode=EMPIRICAL, counts=tuple(counts), samples=dist.samples)


def mixture(k: int, parts: List[Tuple[Fraction, OutcomeDistribution]]) -> OutcomeDistribution:
    """Exact convex combination sum_i w_i·D_i."""
    masses = [Fraction(0)] * ((1 << k) + 2)
    for weight, dist in parts:
        if dist.mode != EXACT:
            raise ModeMismatch("mixtures are formed from exact distributions only")
        for i, m in enumerate(dist.masses):
            if m:
                masses[i] += weight * m
    return OutcomeDistribution.exact_from_masses(k, masses)
