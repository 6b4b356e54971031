"""
Tests for the NM security audit: verdicts, determinism, simulator
independence and the out-of-regime handling.
"""

import json
from fractions import Fraction

import pytest

from nmcode.amd import amd_build
from nmcode.audit import format_number, nm_security_audit, sample_adversaries
from nmcode.field_linalg import GF2, FieldMatrix
from nmcode.lecss import lecss_from_generator
from nmcode.nmc import MONTECARLO, construction1, hamming_construction2
from nmcode.outcomes import EXACT
from nmcode.tamper import UNIFORM

from test_lecss import SIMPLEX_EVEN


@pytest.fixture(scope='module')
def c1_code():
    lecss = lecss_from_generator(FieldMatrix(GF2, SIMPLEX_EVEN), inner_dim=3)
    return construction1(lecss, amd_build(1, 1), rho_r=Fraction(1, 7), rho_w=1)


def test_exact_audit_within_bound(ext_hamming_c2):
    report = nm_security_audit(ext_hamming_c2, adversary_count=3, rho_r=Fraction(1, 16),
                               rho_w=Fraction(6, 16), seed=7)
    assert len(report.per_adversary) == 3
    assert not report.exceeded
    assert not report.violated
    assert report.simulator_independent
    assert report.max_sd <= report.claimed_bound
    assert sum(report.histogram) == 3 * 2


def test_audit_is_deterministic(ext_hamming_c2):
    args = dict(adversary_count=2, rho_r=Fraction(1, 16), rho_w=Fraction(6, 16), seed=11, sampler='mixed')
    first = json.dumps(nm_security_audit(ext_hamming_c2, **args).to_dict(), sort_keys=True)
    second = json.dumps(nm_security_audit(ext_hamming_c2, **args).to_dict(), sort_keys=True)
    assert first == second


def test_montecarlo_audit_reports_slack(ext_hamming_c2):
    report = nm_security_audit(ext_hamming_c2, adversary_count=1, rho_r=Fraction(1, 16),
                               rho_w=Fraction(6, 16), mode=MONTECARLO, samples=20_000, seed=3)
    assert report.samples == 20_000
    assert report.slack > 0
    assert not report.violated


@pytest.mark.parametrize('mode', [EXACT, MONTECARLO])
def test_c1_audit_in_both_modes(c1_code, mode):
    """The exact Construction 1 simulator is compared with exact or sampled experiments."""
    report = nm_security_audit(c1_code, adversary_count=3, rho_r=Fraction(1, 7), rho_w=Fraction(1, 7),
                               mode=mode, samples=2000, seed=5)
    assert all(r.skipped is None for r in report.per_adversary)
    assert report.guaranteed
    assert not report.violated
    assert report.regime['verdict'] == 'construction 1 theorem'
    if mode == MONTECARLO:
        assert report.samples == 2000
        assert report.slack > 0
        assert isinstance(report.max_sd, float)
    else:
        assert report.samples == 0
        assert report.max_sd <= report.claimed_bound


def test_sampling_without_reads():
    code = hamming_construction2(3, k=1, u=1)
    adversaries = sample_adversaries(code, 3, 0, Fraction(3, 7), UNIFORM, seed=0)
    assert all(f.reads == 0 and f.writes == 3 for f in adversaries)


def test_audit_without_reads(ext_hamming_c2):
    report = nm_security_audit(ext_hamming_c2, adversary_count=2, rho_r=0, rho_w=Fraction(6, 16),
                               sampler='mixed', seed=1)
    assert len(report.per_adversary) == 2
    assert all(r.skipped is None for r in report.per_adversary)
    assert not report.violated
    assert report.max_sd <= report.claimed_bound


def test_mixed_sampler_alternates():
    code = hamming_construction2(3, k=1, u=1)
    adversaries = sample_adversaries(code, 4, Fraction(1, 7), Fraction(3, 7), 'mixed', seed=0)
    assert adversaries[0].name.startswith(UNIFORM)
    assert not adversaries[1].name.startswith(UNIFORM)
    assert all(f.reads == 1 and f.writes == 3 for f in adversaries)
    again = sample_adversaries(code, 4, Fraction(1, 7), Fraction(3, 7), 'mixed', seed=0)
    assert [f.digest() for f in adversaries] == [f.digest() for f in again]


def test_not_guaranteed_is_never_violated():
    """Outside every regime the report only says whether the bound was exceeded."""
    code = hamming_construction2(3, k=1, u=1, rho_r=Fraction(3, 7), rho_w=Fraction(4, 7))
    report = nm_security_audit(code, adversary_count=3, rho_r=Fraction(3, 7), rho_w=Fraction(4, 7), seed=0)
    assert not report.guaranteed
    assert not report.violated
    assert report.to_dict()['regime']['verdict'] == 'not guaranteed'


def test_format_number():
    assert format_number(Fraction(3, 8)) == '3/8'
    assert format_number(0.1234567890123) == 0.123456789
