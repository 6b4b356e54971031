"""
Tests for the NM-SMT protocol over GF(16) wires and for active wiretap
sessions.
"""

from fractions import Fraction

import pytest

from nmcode.errors import BudgetError, RegimeError
from nmcode.field_linalg import get_field
from nmcode.outcomes import EXACT
from nmcode.smtsim import (
    VIEW_NOTE,
    awtp_session,
    forged_transcript,
    replay,
    smt_build,
    smt_nm_audit,
    smt_secrecy_audit,
    smt_transmit,
)
from nmcode.tamper import QaryAction, ao_constant, ao_identity, ao_sample, tamper_sample

GF16 = get_field(4)


def test_build_parameters(smt_protocol):
    """RS[5,3]: two message symbols carry an AMD (2,3) word, δ = 1/4."""
    assert smt_protocol.codec.inner.ell == 2
    assert smt_protocol.codec.inner.rho == Fraction(3, 5)
    assert (smt_protocol.codec.amd.k, smt_protocol.codec.amd.u) == (2, 3)
    assert smt_protocol.delta == Fraction(1, 4)
    assert smt_protocol.claimed_security == Fraction(1, 4)
    assert smt_protocol.codec.randomness_size == 8 * 16 ** 3
    assert smt_protocol.codec.regime.verdict == 'construction 2 theorem'


def test_build_rejects_vacuous_amd():
    """t = 2 leaves one symbol: no AMD code with δ < 1 fits 4 bits."""
    with pytest.raises(RegimeError, match='violated'):
        smt_build(GF16, 5, 2, 2)


def test_build_rejects_low_rho():
    with pytest.raises(RegimeError, match=r'violated rho >= \(1\+t/n\)/2'):
        smt_build(GF16, 5, 2, 2, code_dim=3)


def test_identity_session_delivers(smt_protocol):
    log = smt_transmit(smt_protocol, [1, 0], ao_identity(GF16, 5), seed=1)
    assert log.message == '10'
    assert log.received == '10'
    assert log.sent == log.tampered
    assert VIEW_NOTE in log.notes


def test_add_zero_is_identity(smt_protocol):
    adversary = ao_constant(GF16, [QaryAction.add(0)] * 5)
    assert smt_transmit(smt_protocol, 3, adversary, seed=2).received == '11'


def test_overwrite_with_forged_transcript(smt_protocol):
    """Overwriting every wire with a valid encoding of m' delivers m'."""
    forged = forged_transcript(smt_protocol, [0, 1], seed=4)
    adversary = ao_constant(GF16, [QaryAction.overwrite(int(c)) for c in forged])
    assert smt_transmit(smt_protocol, [1, 1], adversary, seed=5).received == '01'


def test_replay_reproduces_the_log(smt_protocol):
    adversary = ao_sample(GF16, 5, Fraction(1, 5), seed=3)
    log = smt_transmit(smt_protocol, [0, 1], adversary, seed=9)
    assert len(log.view) == 1
    assert replay(smt_protocol, log, adversary).to_dict() == log.to_dict()
    with pytest.raises(BudgetError):
        replay(smt_protocol, log, ao_identity(GF16, 5))


def test_read_budget_enforced(smt_protocol):
    greedy = ao_sample(GF16, 5, Fraction(2, 5), seed=0)
    with pytest.raises(BudgetError):
        smt_transmit(smt_protocol, 0, greedy, seed=0)


def test_secrecy_single_wire(smt_protocol):
    report = smt_secrecy_audit(smt_protocol, 1)
    assert report.mode == EXACT
    assert report.exact_max_sd == 0
    assert report.sets_checked == 5
    assert VIEW_NOTE in report.notes


def test_nm_audit_small(smt_protocol):
    report = smt_nm_audit(smt_protocol, adversary_count=2, mode=EXACT, seed=1)
    assert len(report.per_adversary) == 2
    assert not report.violated
    assert report.simulator_independent
    assert VIEW_NOTE in report.notes


def test_nm_audit_rejects_greedy_adversary(smt_protocol):
    with pytest.raises(BudgetError):
        smt_nm_audit(smt_protocol, adversaries=[ao_sample(GF16, 5, Fraction(2, 5), seed=0)], mode=EXACT)


def test_active_wiretap_session(ext_hamming_c2):
    adversary = tamper_sample(16, Fraction(1, 16), Fraction(6, 16), seed=0)
    log, verdicts = awtp_session(ext_hamming_c2, adversary, [1], seed=2, rho_r=Fraction(1, 16))
    assert log.message == '1'
    assert len(log.view) == 1
    assert verdicts['secrecy']
    assert verdicts['rate']['within']
    assert verdicts['nm']


def test_active_wiretap_budget(ext_hamming_c2):
    adversary = tamper_sample(16, Fraction(2, 16), Fraction(6, 16), seed=0)
    with pytest.raises(BudgetError):
        awtp_session(ext_hamming_c2, adversary, [0], seed=0, rho_r=Fraction(1, 16))
