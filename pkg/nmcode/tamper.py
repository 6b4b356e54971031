"""
Tampering adversaries.

Binary family: a function reads the positions S_r, and the read value α
selects a vector of bitwise actions (Set0, Set1, Keep, Flip) applied to the
positions S_w; every other position is copied. The q-ary family replaces the
actions by Add(Δ) and Overwrite(c) on every wire.

Read values are packed into an integer index with the first read position
as the most significant digit. The action table is materialised when
|S_r| <= 20; larger read sets carry a rule instead.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, field as dc_field
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import BudgetError, DimensionError, NmCodeError
from .field_linalg import GF2, FieldSpec, FieldVector, enumerate_vectors, pack_digits

logger = logging.getLogger(__name__)

TABLE_READ_LIMIT = 20

UNIFORM = 'uniform'
STRUCTURED = 'structured'

STRATEGIES = ('all_set0', 'all_set1', 'all_flip', 'copy_read', 'threshold', 'overwrite_to')
AO_STRATEGIES = ('identity', 'overwrite_all', 'add_constant', 'copy_read', 'mixed')

Rate = Union[Fraction, float, int]


class BitAction(IntEnum):
    """Bitwise actions; bit 1 of the code means 'depends on x', bit 0 is the constant."""

    SET0 = 0
    SET1 = 1
    KEEP = 2
    FLIP = 3

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]


_SYMBOLS = {BitAction.SET0: '0', BitAction.SET1: '1', BitAction.KEEP: 'K', BitAction.FLIP: 'F'}
_FROM_SYMBOL = {v: k for k, v in _SYMBOLS.items()}


def apply_actions(actions: np.ndarray, bits: np.ndarray) -> np.ndarray:
    """Vectorised action application: (a & 1) ^ ((a >> 1) & x)."""
    actions = np.asarray(actions, dtype=np.int64)
    return (actions & 1) ^ ((actions >> 1) & bits)


def difference_actions(actions: np.ndarray) -> np.ndarray:
    """Δ swaps {Set0, Set1} with {Keep, Flip}: a ↦ a ^ 2."""
    return np.asarray(actions, dtype=np.int64) ^ 2


def is_overwrite(actions: np.ndarray) -> np.ndarray:
    return np.asarray(actions, dtype=np.int64) < 2


def budget(n: int, rate: Rate) -> int:
    """floor(n·ρ), with ρ recovered as a rational."""
    rate = Fraction(rate).limit_denominator(1 << 30)
    if not 0 <= rate <= 1:
        raise DimensionError(f"rate {rate} outside [0, 1]")
    return math.floor(rate * n)


# --- keyed rules for large read sets ---

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z + np.uint64(0x9E3779B97F4A7C15)) & _MASK
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & _MASK
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & _MASK
    return z ^ (z >> np.uint64(31))


def _read_hash(read_bits: np.ndarray, key: int) -> np.ndarray:
    h = np.full(read_bits.shape[0], np.uint64(key & 0xFFFFFFFFFFFFFFFF), dtype=np.uint64)
    for start in range(0, read_bits.shape[1], 32):
        chunk = pack_digits(GF2, read_bits[:, start:start + 32]).astype(np.uint64)
        h = _mix64(h ^ chunk)
    return h


def _read_rows(values, width: int) -> np.ndarray:
    """(N, width) view of read values; N survives width 0."""
    values = np.asarray(values, dtype=np.int64)
    if values.ndim == 2:
        if values.shape[1] != width:
            raise DimensionError(f"expected {width} read positions, got {values.shape[1]}")
        return values
    if width == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return values.reshape(-1, width)


def keyed_rule(key: int, width: int, alphabet: int = 4) -> Callable[[np.ndarray], np.ndarray]:
    """Pseudo-random table: action j of read value α is mix(h(α) + j) mod alphabet."""
    def rule(read_bits: np.ndarray) -> np.ndarray:
        h = _read_hash(read_bits, key)
        cols = [(_mix64(h + np.uint64(j)) % np.uint64(alphabet)).astype(np.int64) for j in range(width)]
        return np.stack(cols, axis=1) if cols else np.zeros((read_bits.shape[0], 0), dtype=np.int64)
    return rule


# --- binary tampering functions ---

@dataclass(frozen=True, eq=False)
class TamperFunction:
    """
    f_{S_r, S_w, g}. Exactly one of `table` (2^|S_r| x |S_w| action codes)
    and `rule` (read bits (N, |S_r|) -> actions (N, |S_w|)) is set.
    """

    n: int
    read_set: Tuple[int, ...]
    write_set: Tuple[int, ...]
    table: Optional[np.ndarray] = dc_field(default=None, repr=False)
    rule: Optional[Callable[[np.ndarray], np.ndarray]] = dc_field(default=None, repr=False)
    name: str = 'table'

    def __post_init__(self):
        for label, idx in (('read', self.read_set), ('write', self.write_set)):
            if list(idx) != sorted(set(idx)) or any(not 0 <= i < self.n for i in idx):
                raise DimensionError(f"{label} set must be sorted distinct indices in 0..{self.n - 1}")
        if (self.table is None) == (self.rule is None):
            raise NmCodeError("a tampering function needs exactly one of table or rule")
        if self.table is not None:
            table = np.array(self.table, dtype=np.int64).reshape(1 << len(self.read_set), len(self.write_set))
            if table.size and (table.min() < 0 or table.max() > 3):
                raise DimensionError("action codes must be in 0..3")
            table.setflags(write=False)
            object.__setattr__(self, 'table', table)

    @property
    def reads(self) -> int:
        return len(self.read_set)

    @property
    def writes(self) -> int:
        return len(self.write_set)

    def actions_for_reads(self, read_bits: np.ndarray) -> np.ndarray:
        read_bits = _read_rows(read_bits, self.reads)
        if self.table is not None:
            return self.table[pack_digits(GF2, read_bits)]
        return np.asarray(self.rule(read_bits), dtype=np.int64)

    def actions_for_alpha(self, alpha: int) -> np.ndarray:
        if self.table is not None:
            return self.table[alpha]
        bits = np.array([[(alpha >> (self.reads - 1 - j)) & 1 for j in range(self.reads)]], dtype=np.int64)
        return self.actions_for_reads(bits)[0]

    def full_actions(self, alpha: int) -> np.ndarray:
        """Length-n action vector for read value α (Keep outside S_w)."""
        out = np.full(self.n, int(BitAction.KEEP), dtype=np.int64)
        out[list(self.write_set)] = self.actions_for_alpha(alpha)
        return out

    def apply_batch(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        if not self.write_set:
            return words.copy()
        actions = self.actions_for_reads(words[:, list(self.read_set)])
        out = words.copy()
        out[:, list(self.write_set)] = apply_actions(actions, words[:, list(self.write_set)])
        return out

    def to_text(self) -> str:
        """Header, then one line per read value: α bits and the action symbols."""
        header = (f"tamper n={self.n} read={','.join(map(str, self.read_set))} "
                  f"write={','.join(map(str, self.write_set))}")
        if self.table is None:
            return header + f"\nrule {self.name}\n"
        lines = [header]
        for alpha in range(1 << self.reads):
            bits = format(alpha, f'0{self.reads}b') if self.reads else '-'
            acts = ''.join(_SYMBOLS[BitAction(int(a))] for a in self.table[alpha]) or '-'
            lines.append(f"{bits} {acts}")
        return '\n'.join(lines) + '\n'

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _parse_indices(token: str) -> Tuple[int, ...]:
    value = token.split('=', 1)[1]
    return tuple(int(i) for i in value.split(',')) if value else ()


def tamper_from_text(text: str) -> TamperFunction:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith('tamper '):
        raise DimensionError("tampering function text must start with a 'tamper' header")
    fields = lines[0].split()[1:]
    n = int(fields[0].split('=')[1])
    read_set, write_set = _parse_indices(fields[1]), _parse_indices(fields[2])
    if len(lines) > 1 and lines[1].startswith('rule '):
        raise DimensionError("rule-based functions cannot be restored from text")
    body = lines[1:]
    if len(body) != 1 << len(read_set):
        raise DimensionError(f"expected {1 << len(read_set)} table lines, found {len(body)}")
    table = np.zeros((len(body), len(write_set)), dtype=np.int64)
    for line in body:
        bits, acts = line.split()
        alpha = int(bits, 2) if bits != '-' else 0
        if acts != '-':
            table[alpha] = [int(_FROM_SYMBOL[ch]) for ch in acts]
    return TamperFunction(n=n, read_set=read_set, write_set=write_set, table=table)


def tamper_apply(f: TamperFunction, x: FieldVector) -> FieldVector:
    """x̃_{S_w} = g(x_{S_r})(x_{S_w}); positions outside S_w are copied."""
    if len(x) != f.n:
        raise DimensionError(f"word length {len(x)} != n={f.n}")
    return FieldVector(GF2, f.apply_batch(x.elems[None, :])[0])


def difference_function(f: TamperFunction, alpha: int) -> Tuple[BitAction, ...]:
    """Δg^α, the action vector with g^α(x) = x ⊕ Δg^α(x)."""
    if not 0 <= alpha < (1 << f.reads):
        raise DimensionError(f"read value {alpha} outside 0..{(1 << f.reads) - 1}")
    return tuple(BitAction(int(a)) for a in difference_actions(f.actions_for_alpha(alpha)))


def make_tamper(n: int, read_set: Iterable[int], write_set: Iterable[int],
                g: Union[Dict[int, Sequence[int]], Callable[[np.ndarray], np.ndarray], np.ndarray, Sequence],
                name: Optional[str] = None) -> TamperFunction:
    """
    Build a function from a table (array, or {α: actions}, missing α = all
    Keep) or a rule; rules over at most 20 reads are materialised.
    """
    read_set, write_set = tuple(sorted(read_set)), tuple(sorted(write_set))
    rows = 1 << len(read_set) if len(read_set) <= TABLE_READ_LIMIT else None
    if callable(g):
        if rows is None:
            return TamperFunction(n=n, read_set=read_set, write_set=write_set, rule=g,
                                  name=name or 'rule')
        reads = enumerate_vectors(GF2, len(read_set))
        table = np.asarray(g(reads), dtype=np.int64).reshape(rows, len(write_set))
    elif isinstance(g, dict):
        if rows is None:
            raise BudgetError(f"explicit tables need |S_r| <= {TABLE_READ_LIMIT}")
        table = np.full((rows, len(write_set)), int(BitAction.KEEP), dtype=np.int64)
        for alpha, acts in g.items():
            table[alpha] = [int(a) for a in acts]
    else:
        if rows is None:
            raise BudgetError(f"explicit tables need |S_r| <= {TABLE_READ_LIMIT}")
        table = np.asarray(g, dtype=np.int64).reshape(rows, len(write_set))
    return TamperFunction(n=n, read_set=read_set, write_set=write_set, table=table,
                          name=name or 'table')


def identity_function(n: int) -> TamperFunction:
    return make_tamper(n, (), (), np.zeros((1, 0), dtype=np.int64), name='identity')


def constant_function(n: int, actions: Sequence[int], name: str = 'constant') -> TamperFunction:
    """Read nothing, apply a fixed action vector to every position."""
    return make_tamper(n, (), range(n), np.asarray(actions, dtype=np.int64).reshape(1, n), name=name)


def overwrite_function(target: FieldVector) -> TamperFunction:
    """Overwrite every bit with `target`."""
    return constant_function(len(target), target.elems, name=f"overwrite_to {target.to_text()}")


def _strategy_rule(strategy: str, reads: int, writes: int, rng: np.random.Generator) -> Callable:
    width = writes
    if strategy == 'all_set0':
        return lambda r: np.zeros((r.shape[0], width), dtype=np.int64)
    if strategy == 'all_set1':
        return lambda r: np.ones((r.shape[0], width), dtype=np.int64)
    if strategy == 'all_flip':
        return lambda r: np.full((r.shape[0], width), int(BitAction.FLIP), dtype=np.int64)
    if strategy == 'copy_read':
        if reads == 0:
            return lambda r: np.full((r.shape[0], width), int(BitAction.KEEP), dtype=np.int64)
        cols = [j % reads for j in range(width)]
        return lambda r: r[:, cols].astype(np.int64)
    if strategy == 'threshold':
        cut = int(rng.integers(0, reads + 1))
        hit = rng.integers(0, 4, size=width, dtype=np.int64)
        miss = rng.integers(0, 4, size=width, dtype=np.int64)
        return lambda r: np.where((r.sum(axis=1) >= cut)[:, None], hit[None, :], miss[None, :])
    if strategy == 'overwrite_to':
        target = rng.integers(0, 2, size=width, dtype=np.int64)
        return lambda r: np.broadcast_to(target, (r.shape[0], width)).copy()
    raise NmCodeError(f"unknown strategy: {strategy}")


def tamper_sample(n: int, rho_r: Rate, rho_w: Rate, mode: str = UNIFORM, seed: int = 0,
                  strategy: Optional[str] = None) -> TamperFunction:
    """
    Draw a function with |S_r| = floor(nρr) and |S_w| = floor(nρw).

    Args:
        n: Codeword length
        rho_r: Read fraction
        rho_w: Write fraction
        mode: 'uniform' (i.i.d. uniform actions per read value) or
            'structured' (one of STRATEGIES)
        seed: RNG seed; the draw is a pure function of all arguments
        strategy: Structured strategy name; drawn from the seed when omitted

    Returns:
        TamperFunction
    """
    rng = np.random.default_rng(seed)
    reads, writes = budget(n, rho_r), budget(n, rho_w)
    read_set = tuple(sorted(int(i) for i in rng.choice(n, size=reads, replace=False)))
    write_set = tuple(sorted(int(i) for i in rng.choice(n, size=writes, replace=False)))

    if mode == UNIFORM:
        if reads <= TABLE_READ_LIMIT:
            table = rng.integers(0, 4, size=(1 << reads, writes), dtype=np.int64)
            return TamperFunction(n=n, read_set=read_set, write_set=write_set, table=table,
                                  name=f"uniform seed={seed}")
        key = int(rng.integers(0, 1 << 62))
        return TamperFunction(n=n, read_set=read_set, write_set=write_set,
                              rule=keyed_rule(key, writes), name=f"keyed-uniform seed={seed}")
    if mode != STRUCTURED:
        raise NmCodeError(f"unknown sampling mode: {mode}")
    if strategy is None:
        strategy = STRATEGIES[int(rng.integers(0, len(STRATEGIES)))]
    rule = _strategy_rule(strategy, reads, writes, rng)
    return make_tamper(n, read_set, write_set, rule, name=f"{strategy} seed={seed}")


def check_budget(f: TamperFunction, rho_r: Rate, rho_w: Rate) -> None:
    if f.reads > budget(f.n, rho_r):
        raise BudgetError(f"adversary reads {f.reads} positions, budget is {budget(f.n, rho_r)}")
    if f.writes > budget(f.n, rho_w):
        raise BudgetError(f"adversary writes {f.writes} positions, budget is {budget(f.n, rho_w)}")


# --- family size ---

def family_size_bound(n: int, rho_r: Rate, rho_w: Rate) -> float:
    """
    log2 of C(n, nρr)·C(n, nρw)·(4^(nρw))^(2^(nρr)); the binomials are
    exact integers and the last factor contributes 2^(nρr)·2nρw bits.
    """
    reads, writes = budget(n, rho_r), budget(n, rho_w)
    return math.log2(math.comb(n, reads)) + math.log2(math.comb(n, writes)) + (1 << reads) * 2 * writes


def family_loglog(n: int, rho_r: Rate, rho_w: Rate) -> float:
    return math.log2(family_size_bound(n, rho_r, rho_w))


def family_size_threshold(rho_r: Rate, rho_w: Rate, xi: float,
                          n_values: Sequence[int]) -> Optional[int]:
    """
    Smallest n in the grid from which loglog|F| <= n(ρr + ξ) holds at every
    larger grid point, or None if it fails at the largest.
    """
    threshold = None
    for n in sorted(n_values, reverse=True):
        if family_loglog(n, rho_r, rho_w) <= n * (float(Fraction(rho_r)) + xi):
            threshold = n
        else:
            break
    return threshold


# --- privacy breaker ---

def distinguisher_set(view0: np.ndarray, view1: np.ndarray) -> List[int]:
    """{α : Pr[view of m0 = α] > Pr[view of m1 = α]} from two view histograms."""
    view0 = np.asarray(view0, dtype=float)
    view1 = np.asarray(view1, dtype=float)
    return [int(a) for a in np.nonzero(view0 / view0.sum() > view1 / view1.sum())[0]]


def privacy_breaker(distinguisher: Iterable[int], read_set: Sequence[int], n: int,
                    target: int = 0) -> TamperFunction:
    """
    Keep the target bit when the read value lies in D, flip it otherwise.
    A privacy gap on S_r becomes a same* gap of the same size.
    """
    read_set = tuple(sorted(read_set))
    if len(read_set) > TABLE_READ_LIMIT:
        raise BudgetError(f"privacy breaker needs |S_r| <= {TABLE_READ_LIMIT}")
    table = np.full((1 << len(read_set), 1), int(BitAction.FLIP), dtype=np.int64)
    for alpha in distinguisher:
        table[alpha, 0] = int(BitAction.KEEP)
    return TamperFunction(n=n, read_set=read_set, write_set=(target,), table=table,
                          name='privacy-breaker')


# --- q-ary add/overwrite family ---

ADD = 0
OVERWRITE = 1


@dataclass(frozen=True)
class QaryAction:
    kind: int
    value: int

    @classmethod
    def add(cls, delta: int) -> 'QaryAction':
        return cls(ADD, int(delta))

    @classmethod
    def overwrite(cls, c: int) -> 'QaryAction':
        return cls(OVERWRITE, int(c))

    def __str__(self) -> str:
        return f"{'A' if self.kind == ADD else 'W'}{self.value:x}"


@dataclass(frozen=True, eq=False)
class AoTamperFunction:
    """
    f_{S_r,[n],g} over GF(q): the read value selects an Add/Overwrite action
    on every wire. Tables are (q^|S_r|, n) arrays of kinds and values; rules
    map read symbols (N, |S_r|) to a (kinds, values) pair.
    """

    field: FieldSpec
    n: int
    read_set: Tuple[int, ...]
    kinds: Optional[np.ndarray] = dc_field(default=None, repr=False)
    values: Optional[np.ndarray] = dc_field(default=None, repr=False)
    rule: Optional[Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]] = dc_field(default=None, repr=False)
    name: str = 'table'

    def __post_init__(self):
        if list(self.read_set) != sorted(set(self.read_set)) or any(not 0 <= i < self.n for i in self.read_set):
            raise DimensionError(f"read set must be sorted distinct indices in 0..{self.n - 1}")
        if (self.kinds is None) == (self.rule is None):
            raise NmCodeError("an AO tampering function needs exactly one of table or rule")
        if self.kinds is not None:
            rows = self.field.q ** len(self.read_set)
            kinds = np.array(self.kinds, dtype=np.int64).reshape(rows, self.n)
            values = np.array(self.values, dtype=np.int64).reshape(rows, self.n)
            if values.size and (values.min() < 0 or values.max() >= self.field.q):
                raise DimensionError(f"action values outside GF({self.field.q})")
            kinds.setflags(write=False)
            values.setflags(write=False)
            object.__setattr__(self, 'kinds', kinds)
            object.__setattr__(self, 'values', values)

    @property
    def reads(self) -> int:
        return len(self.read_set)

    def actions_for_reads(self, read_symbols: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        read_symbols = _read_rows(read_symbols, self.reads)
        if self.kinds is not None:
            idx = pack_digits(self.field, read_symbols)
            return self.kinds[idx], self.values[idx]
        kinds, values = self.rule(read_symbols)
        return np.asarray(kinds, dtype=np.int64), np.asarray(values, dtype=np.int64)

    def actions_for_alpha(self, alpha: int) -> Tuple[np.ndarray, np.ndarray]:
        if self.kinds is not None:
            return self.kinds[alpha], self.values[alpha]
        symbols = enumerate_vectors(self.field, self.reads, alpha, alpha + 1)
        kinds, values = self.actions_for_reads(symbols)
        return kinds[0], values[0]

    def apply_batch(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        kinds, values = self.actions_for_reads(words[:, list(self.read_set)])
        return np.where(kinds == OVERWRITE, values, words ^ values)

    def to_text(self) -> str:
        header = f"ao-tamper q={self.field.q} n={self.n} read={','.join(map(str, self.read_set))}"
        if self.kinds is None:
            return header + f"\nrule {self.name}\n"
        lines = [header]
        for alpha in range(self.kinds.shape[0]):
            acts = ' '.join(str(QaryAction(int(k), int(v))) for k, v in zip(self.kinds[alpha], self.values[alpha]))
            lines.append(f"{alpha} {acts}")
        return '\n'.join(lines) + '\n'

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def make_ao(field: FieldSpec, n: int, read_set: Iterable[int],
            g: Union[Callable[[np.ndarray], Sequence[QaryAction]], Sequence[Sequence[QaryAction]]],
            name: str = 'table') -> AoTamperFunction:
    """
    Build from a per-α list of n actions, or a callable of the read
    symbols returning n actions.
    """
    read_set = tuple(sorted(read_set))
    rows = field.q ** len(read_set)
    if rows > (1 << TABLE_READ_LIMIT):
        raise BudgetError(f"AO tables need q^|S_r| <= 2^{TABLE_READ_LIMIT}")
    reads = enumerate_vectors(field, len(read_set))
    kinds = np.zeros((rows, n), dtype=np.int64)
    values = np.zeros((rows, n), dtype=np.int64)
    for alpha in range(rows):
        actions = g(reads[alpha]) if callable(g) else g[alpha]
        if len(actions) != n:
            raise DimensionError(f"expected {n} actions, got {len(actions)}")
        kinds[alpha] = [a.kind for a in actions]
        values[alpha] = [a.value for a in actions]
    return AoTamperFunction(field=field, n=n, read_set=read_set, kinds=kinds, values=values, name=name)


def ao_constant(field: FieldSpec, actions: Sequence[QaryAction], name: str = 'constant') -> AoTamperFunction:
    return make_ao(field, len(actions), (), [list(actions)], name=name)


def ao_identity(field: FieldSpec, n: int) -> AoTamperFunction:
    return ao_constant(field, [QaryAction.add(0)] * n, name='identity')


def ao_apply(f: AoTamperFunction, x: FieldVector) -> FieldVector:
    """Add(Δ) gives x_i + Δ, Overwrite(c) gives c, wire by wire."""
    if len(x) != f.n or x.field != f.field:
        raise DimensionError(f"expected a length-{f.n} vector over GF({f.field.q})")
    return FieldVector(f.field, f.apply_batch(x.elems[None, :])[0])


def ao_difference(kinds: np.ndarray, values: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Δg(x) = g(x) - x: Add(Δ) contributes Δ, Overwrite(c) contributes c - x."""
    return np.where(kinds == OVERWRITE, values ^ words, values)


def ao_from_bit(f: TamperFunction) -> AoTamperFunction:
    """The q = 2 correspondence: Flip = Add(1), Keep = Add(0), Set_c = Overwrite(c)."""
    if f.table is None:
        raise BudgetError("only tabled functions convert to the AO family")
    rows = 1 << f.reads
    kinds = np.zeros((rows, f.n), dtype=np.int64)
    values = np.zeros((rows, f.n), dtype=np.int64)
    for alpha in range(rows):
        acts = f.full_actions(alpha)
        kinds[alpha] = np.where(acts < 2, OVERWRITE, ADD)
        values[alpha] = acts & 1
    return AoTamperFunction(field=GF2, n=f.n, read_set=f.read_set, kinds=kinds, values=values,
                            name=f"from-bit {f.name}")


def _ao_strategy(field: FieldSpec, n: int, reads: int, strategy: str,
                 rng: np.random.Generator) -> Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]:
    q = field.q

    def const(kinds, values):
        return lambda r: (np.broadcast_to(kinds, (r.shape[0], n)).copy(),
                          np.broadcast_to(values, (r.shape[0], n)).copy())

    if strategy == 'identity':
        return const(np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64))
    if strategy == 'overwrite_all':
        return const(np.ones(n, dtype=np.int64), rng.integers(0, q, size=n, dtype=np.int64))
    if strategy == 'add_constant':
        return const(np.zeros(n, dtype=np.int64), rng.integers(0, q, size=n, dtype=np.int64))
    if strategy == 'copy_read':
        if reads == 0:
            return const(np.ones(n, dtype=np.int64), np.zeros(n, dtype=np.int64))
        cols = [j % reads for j in range(n)]
        return lambda r: (np.ones((r.shape[0], n), dtype=np.int64), r[:, cols].astype(np.int64))
    if strategy == 'mixed':
        mask = rng.integers(0, 2, size=n, dtype=np.int64)
        base = rng.integers(0, q, size=n, dtype=np.int64)
        shift = rng.integers(1, q, size=n, dtype=np.int64)

        def rule(r):
            parity = (r.sum(axis=1) % 2)[:, None] if r.shape[1] else np.zeros((r.shape[0], 1), dtype=np.int64)
            values = np.where(parity == 1, base ^ shift, base)
            return np.broadcast_to(mask, values.shape).copy(), values
        return rule
    raise NmCodeError(f"unknown AO strategy: {strategy}")


def ao_sample(field: FieldSpec, n: int, rho_r: Rate, mode: str = UNIFORM, seed: int = 0,
              strategy: Optional[str] = None) -> AoTamperFunction:
    """
    Draw an F_AO function with |S_r| = floor(nρr). Uniform mode picks each
    wire's kind and value uniformly per read value; structured mode uses one
    of AO_STRATEGIES.
    """
    rng = np.random.default_rng(seed)
    reads = budget(n, rho_r)
    read_set = tuple(sorted(int(i) for i in rng.choice(n, size=reads, replace=False)))
    rows = field.q ** reads
    if mode == UNIFORM:
        if rows > (1 << TABLE_READ_LIMIT):
            raise BudgetError(f"uniform AO tables need q^|S_r| <= 2^{TABLE_READ_LIMIT}")
        kinds = rng.integers(0, 2, size=(rows, n), dtype=np.int64)
        values = rng.integers(0, field.q, size=(rows, n), dtype=np.int64)
        return AoTamperFunction(field=field, n=n, read_set=read_set, kinds=kinds, values=values,
                                name=f"uniform seed={seed}")
    if mode != STRUCTURED:
        raise NmCodeError(f"unknown sampling mode: {mode}")
    if strategy is None:
        strategy = AO_STRATEGIES[int(rng.integers(0, len(AO_STRATEGIES)))]
    rule = _ao_strategy(field, n, reads, strategy, rng)
    if rows <= (1 << TABLE_READ_LIMIT):
        kinds, values = rule(enumerate_vectors(field, reads))
        return AoTamperFunction(field=field, n=n, read_set=read_set, kinds=kinds, values=values,
                                name=f"{strategy} seed={seed}")
    return AoTamperFunction(field=field, n=n, read_set=read_set, rule=rule, name=f"{strategy} seed={seed}")


def check_ao_budget(f: AoTamperFunction, max_reads: int) -> None:
    if f.reads > max_reads:
        raise BudgetError(f"adversary reads {f.reads} wires, budget is {max_reads}")
