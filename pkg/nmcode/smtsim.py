"""
Applications of Construction 2: one-round non-malleable secure message
transmission over n wires against F_AO adversaries, and sessions of the
active-adversary wiretap II channel.

The adversary's view is the tuple of wire values it reads. Its actions
are its own choice and are not counted as part of the view.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import config
from .amd import tightest_code
from .audit import AuditReport, nm_security_audit
from .audit_logger import get_audit_logger
from .bounds import c2_regime
from .errors import BudgetError, CodeError, DimensionError, InfeasibleEnumeration, RegimeError
from .field_linalg import GF2, FieldSpec, pack_digits
from .linear_codes import reed_solomon_code
from .nmc import CONSTRUCTION1, CONSTRUCTION2, MONTECARLO, NmCode, Tamper, construction2
from .outcomes import EXACT, Outcome, mc_half_width
from .tamper import (
    AoTamperFunction,
    TamperFunction,
    ao_sample,
    budget,
    check_ao_budget,
)
from .wiretap import PrivacyReport, wt_build, wt_verify_privacy, worst_pair_distance
from .workers import derive_seed

logger = logging.getLogger(__name__)

VIEW_NOTE = 'View_A = read wire values'


@dataclass(frozen=True)
class WireTranscript:
    field: FieldSpec
    wires: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'wires', tuple(int(w) for w in self.wires))
        if any(not 0 <= w < self.field.q for w in self.wires):
            raise DimensionError(f"wire values outside GF({self.field.q})")

    def __len__(self) -> int:
        return len(self.wires)

    def project(self, positions: Sequence[int]) -> Tuple[int, ...]:
        return tuple(self.wires[i] for i in positions)

    def to_text(self) -> str:
        if self.field.q == 2:
            return ''.join(str(w) for w in self.wires)
        return ' '.join(format(w, 'x') for w in self.wires)


@dataclass(frozen=True)
class SmtProtocol:
    """n wires, t of them corruptible, carrying one Construction 2 codeword."""

    field: FieldSpec
    n: int
    t: int
    codec: NmCode
    epsilon: Fraction
    delta: Fraction
    seed: int = 0

    @property
    def k(self) -> int:
        return self.codec.k

    @property
    def rho_r(self) -> Fraction:
        return Fraction(self.t, self.n)

    @property
    def claimed_security(self) -> Fraction:
        return 2 * self.epsilon + self.delta

    def to_dict(self) -> Dict:
        return {
            'q': self.field.q,
            'n': self.n,
            't': self.t,
            'k': self.k,
            'epsilon': str(self.epsilon),
            'delta': str(self.delta),
            'claimed_security': str(self.claimed_security),
            'regime': self.codec.regime.to_dict(),
            'codec': self.codec.to_dict(),
            'seed': self.seed,
        }


@dataclass
class SessionLog:
    """One transmission, with everything needed to replay it."""

    protocol: Dict
    message: str
    adversary: Dict
    sent: WireTranscript
    view: Tuple[int, ...]
    tampered: WireTranscript
    received: str
    seeds: Dict[str, int]
    notes: List[str] = dc_field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'protocol': self.protocol,
            'message': self.message,
            'adversary': self.adversary,
            'sent': self.sent.to_text(),
            'view': list(self.view),
            'tampered': self.tampered.to_text(),
            'received': self.received,
            'seeds': dict(self.seeds),
            'notes': list(self.notes),
        }

    def replay_record(self) -> Dict:
        return {'message': self.message, 'adversary': self.adversary['digest'], 'seeds': dict(self.seeds)}


def smt_build(field: FieldSpec, n: int, t: int, message_bits: int, seed: int = 0,
              code_dim: Optional[int] = None) -> SmtProtocol:
    """
    NM-SMT protocol: RS coset wiretap code with an AMD code packed into
    the message symbols.

    Args:
        field: Wire alphabet GF(2^w)
        n: Number of wires
        t: Number of wires the adversary may read
        message_bits: k, message length in bits
        seed: Seed for the coset map
        code_dim: RS dimension of the randomness code; by default the
            smallest one meeting rho >= (1+t/n)/2, which leaves the most
            message symbols

    Raises:
        RegimeError: rho >= (1+t/n)/2 fails, or no AMD code fits with a
            non-vacuous bound
    """
    if not 0 <= t < n:
        raise RegimeError(f"need 0 <= t < n, got t={t}, n={n}")
    dim = -(-(n + t) // 2) if code_dim is None else code_dim
    rho = Fraction(dim, n)
    threshold = (1 + Fraction(t, n)) / 2
    if rho < threshold:
        raise RegimeError(f"violated rho >= (1+t/n)/2: rho = {rho} < {threshold}")
    if dim >= n:
        raise RegimeError(f"RS[{n},{dim}] leaves no message symbols")

    wt = wt_build(reed_solomon_code(field, n, dim), seed)
    if wt.rho < threshold:
        raise RegimeError(f"violated rho >= (1+t/n)/2: rho = {wt.rho} < {threshold}")
    try:
        amd = tightest_code(message_bits, wt.ell * field.w)
    except CodeError as e:
        raise RegimeError(f"violated k+2u <= l*w: {e}")
    if amd.delta >= 1:
        raise RegimeError(f"violated delta < 1: best AMD code in {wt.ell * field.w} bits has delta = {amd.delta}")

    codec = construction2(wt, amd, rho_r=Fraction(t, n), rho_w=1)
    protocol = SmtProtocol(field=field, n=n, t=t, codec=codec, epsilon=wt.epsilon,
                           delta=amd.delta, seed=seed)
    logger.info(f"SMT protocol GF({field.q}) n={n} t={t}: RS[{n},{dim}], ell={wt.ell}, "
                f"AMD k={amd.k} u={amd.u} delta={amd.delta}")
    return protocol


def _message_index(k: int, m: Union[int, Sequence[int]]) -> int:
    if isinstance(m, (int, np.integer)):
        index = int(m)
    else:
        bits = [int(b) for b in m]
        if len(bits) != k:
            raise DimensionError(f"message has {len(bits)} bits, expected {k}")
        index = int(pack_digits(GF2, np.array(bits, dtype=np.int64)))
    if not 0 <= index < (1 << k):
        raise DimensionError(f"message index {index} outside 0..{(1 << k) - 1}")
    return index


def _session_randomness(code: NmCode, seed: int) -> int:
    rng = np.random.default_rng(derive_seed(seed, 'session'))
    return int(rng.integers(0, code.randomness_size))


def _adversary_record(f: Tamper) -> Dict:
    return {'name': f.name, 'digest': f.digest(), 'reads': list(f.read_set)}


def _run_session(code: NmCode, f: Tamper, message_index: int, seed: int,
                 protocol: Dict) -> SessionLog:
    rand_index = _session_randomness(code, seed)
    word = code.encode_indices(message_index, np.array([rand_index], dtype=np.int64))
    tampered = f.apply_batch(word)
    outcome = Outcome.from_index(code.k, int(code.decode_batch(tampered)[0]))
    field = code.field
    sent = WireTranscript(field, word[0])
    return SessionLog(
        protocol=protocol,
        message=Outcome.from_index(code.k, message_index).label(),
        adversary=_adversary_record(f),
        sent=sent,
        view=sent.project(f.read_set),
        tampered=WireTranscript(field, tampered[0]),
        received=outcome.label(),
        seeds={'seed': seed, 'randomness_index': rand_index},
        notes=[VIEW_NOTE],
    )


def smt_transmit(protocol: SmtProtocol, m: Union[int, Sequence[int]], adversary: AoTamperFunction,
                 seed: int) -> SessionLog:
    """
    Encode m onto the wires, let the adversary act, decode.

    Raises:
        BudgetError: the adversary reads more than t wires
    """
    if adversary.n != protocol.n or adversary.field != protocol.field:
        raise DimensionError(f"adversary acts on {adversary.n} wires over GF({adversary.field.q})")
    check_ao_budget(adversary, protocol.t)
    log = _run_session(protocol.codec, adversary, _message_index(protocol.k, m), seed,
                       {'q': protocol.field.q, 'n': protocol.n, 't': protocol.t, 'k': protocol.k})
    get_audit_logger().info("smt session", {
        'message': log.message,
        'received': log.received,
        'adversary': log.adversary['digest'],
        'seed': seed,
    })
    return log


def replay(protocol: SmtProtocol, log: SessionLog, adversary: AoTamperFunction) -> SessionLog:
    """Re-run a logged session from its seeds; the result equals the log."""
    if adversary.digest() != log.adversary['digest']:
        raise BudgetError(f"adversary digest {adversary.digest()} does not match the log")
    return smt_transmit(protocol, [int(b) for b in log.message], adversary, log.seeds['seed'])


def forged_transcript(protocol: SmtProtocol, m: Union[int, Sequence[int]], seed: int = 0) -> np.ndarray:
    """A valid encoding of m, for overwrite-everything adversaries."""
    code = protocol.codec
    rand_index = _session_randomness(code, derive_seed(seed, 'forgery'))
    return code.encode_indices(_message_index(protocol.k, m), np.array([rand_index]))[0]


# --- audits ---

def _secrecy_exact(code: NmCode, sets: List[Tuple[int, ...]]):
    total = code.randomness_size
    indices = np.arange(total, dtype=np.int64)
    words = np.stack([code.encode_indices(m, indices) for m in range(1 << code.k)])
    return [(s,) + worst_pair_distance(code.field, words, s) for s in sets]


def _secrecy_montecarlo(code: NmCode, sets: List[Tuple[int, ...]], samples: int, seed: int):
    field = code.field
    results = []
    for j, reading_set in enumerate(sets):
        rng = np.random.default_rng(derive_seed(seed, 'secrecy', j))
        support = field.q ** len(reading_set)
        hists = []
        for m in range(1 << code.k):
            words = code.encode_indices(m, rng.integers(0, code.randomness_size, size=samples))
            proj = pack_digits(field, words[:, list(reading_set)]) if reading_set \
                else np.zeros(samples, dtype=np.int64)
            hists.append(np.bincount(proj, minlength=support) / samples)
        best = (0.0, 0, 1)
        for a in range(len(hists)):
            for b in range(a + 1, len(hists)):
                sd = float(np.abs(hists[a] - hists[b]).sum() / 2)
                if sd > best[0]:
                    best = (sd, a, b)
        results.append((reading_set,) + best)
    return results


def smt_secrecy_audit(protocol: SmtProtocol, wire_set_size: int, mode: str = EXACT,
                      samples: int = 100_000, seed: int = 0) -> PrivacyReport:
    """
    Max SD between the views of two messages, over every wire set of
    exactly `wire_set_size` wires. Exact mode falls back to Monte Carlo
    when the enumeration would exceed NMCODE_MAX_ENUMERATION.
    """
    code = protocol.codec
    if not 0 <= wire_set_size <= protocol.n:
        raise DimensionError(f"wire set size must be in 0..{protocol.n}")
    sets = list(combinations(range(protocol.n), wire_set_size))
    notes = [VIEW_NOTE]
    if wire_set_size > protocol.t:
        notes.append(f"wire set size {wire_set_size} exceeds t = {protocol.t}")

    if mode == EXACT:
        size = (1 << code.k) * code.randomness_size * len(sets)
        if size > config['MAX_ENUMERATION']:
            logger.warning(f"secrecy audit needs {size} points; falling back to Monte Carlo")
            notes.append(str(InfeasibleEnumeration('smt secrecy views', size, config['MAX_ENUMERATION'])))
            mode = MONTECARLO
    if mode == EXACT:
        results = _secrecy_exact(code, sets)
        half_width = 0.0
    else:
        results = _secrecy_montecarlo(code, sets, samples, seed)
        half_width = 2 * mc_half_width(protocol.field.q ** wire_set_size, samples)

    label = lambda m: Outcome.from_index(code.k, m).label()  # noqa: E731
    rows = [(s, label(a), label(b), str(sd) if mode == EXACT else f"{sd:.6f}") for s, sd, a, b in results]
    best = max(results, key=lambda r: r[1])
    report = PrivacyReport(
        mode=mode,
        max_set_size=wire_set_size,
        max_sd=float(best[1]),
        exact_max_sd=best[1] if mode == EXACT else None,
        witness=(best[0], label(best[2]), label(best[3])) if best[1] > 0 else None,
        per_size={wire_set_size: float(best[1])},
        rows=rows,
        half_width=half_width,
        sets_checked=len(sets),
        seed=seed if mode == MONTECARLO else None,
        notes=tuple(notes),
    )
    get_audit_logger().info("smt secrecy audit", {'set_size': wire_set_size, 'max_sd': float(best[1]), 'mode': mode})
    return report


def smt_nm_audit(protocol: SmtProtocol, adversaries: Optional[Sequence[AoTamperFunction]] = None,
                 adversary_count: int = 500, sampler: str = 'mixed', mode: str = MONTECARLO,
                 samples: int = 1_000_000, seed: int = 0) -> AuditReport:
    """nm_security_audit over F_AO adversaries reading t wires."""
    if adversaries is None:
        adversaries = []
        for i in range(adversary_count):
            kind = sampler if sampler != 'mixed' else ('uniform' if i % 2 == 0 else 'structured')
            adversaries.append(ao_sample(protocol.field, protocol.n, protocol.rho_r, mode=kind,
                                         seed=derive_seed(seed, 'adversary', i)))
    for f in adversaries:
        check_ao_budget(f, protocol.t)
    report = nm_security_audit(protocol.codec, adversaries=adversaries, mode=mode, seed=seed,
                               samples=samples)
    report.notes.append(VIEW_NOTE)
    return report


def awtp_session(code: NmCode, adversary: TamperFunction, m: Union[int, Sequence[int]], seed: int,
                 rho_r=0) -> Tuple[SessionLog, Dict]:
    """
    One session of the active-adversary wiretap II channel, with secrecy,
    non-malleability and rate verdicts for the code at read fraction ρr.

    Raises:
        BudgetError: the adversary reads more than floor(nρr) bits
    """
    if code.field.q != 2 or not isinstance(adversary, TamperFunction):
        raise DimensionError("active wiretap sessions take a binary code and a bitwise adversary")
    max_reads = budget(code.n, rho_r)
    if adversary.reads > max_reads:
        raise BudgetError(f"adversary reads {adversary.reads} bits, budget is floor(n*rho_r) = {max_reads}")
    rho_r = Fraction(rho_r).limit_denominator(1 << 30)
    log = _run_session(code, adversary, _message_index(code.k, m), seed,
                       {'construction': code.kind, 'n': code.n, 'k': code.k, 'rho_r': str(rho_r)})

    verdicts: Dict = {}
    if code.kind == CONSTRUCTION2:
        try:
            privacy = wt_verify_privacy(code.inner, max_reads)
        except InfeasibleEnumeration:
            privacy = wt_verify_privacy(code.inner, max_reads, mode=MONTECARLO, seed=derive_seed(seed, 'privacy'))
        verdicts['secrecy'] = privacy.max_sd <= privacy.half_width
        verdicts['secrecy_sd'] = privacy.to_dict()['max_sd']
        rate = code.inner.rate
        limit = (1 - rho_r) / 2
        verdicts['rate'] = {'rate': str(rate), 'limit': str(limit), 'within': rate <= limit}
        verdicts['regime'] = c2_regime(code.inner.rho, rho_r, 1).verdict
    elif code.kind == CONSTRUCTION1:
        verdicts['secrecy'] = code.inner.t >= max_reads
        verdicts['secrecy_basis'] = f"uniformity t' = {code.inner.t} >= floor(n*rho_r) = {max_reads}"

    mode = EXACT if code.randomness_size <= config['MAX_ENUMERATION'] else MONTECARLO
    audit = nm_security_audit(code, adversaries=[adversary], mode=mode, seed=seed)
    verdicts['nm'] = not audit.exceeded
    verdicts['nm_sd'] = audit.to_dict()['max_sd']
    verdicts['claimed'] = audit.to_dict()['claimed_bound']
    return log, verdicts
