"""
Tests for the two constructions, their tampering experiments and the
simulators D_f.
"""

from fractions import Fraction

import numpy as np
import pytest

from nmcode.amd import amd_build
from nmcode.bounds import NOT_GUARANTEED
from nmcode.errors import CodeError, RegimeError
from nmcode.field_linalg import GF2, FieldMatrix, FieldVector
from nmcode.lecss import lecss_from_generator
from nmcode.nmc import (
    MONTECARLO,
    IdentityCode,
    agreement_check,
    construction1,
    hamming_construction2,
    nm_decode,
    nm_encode,
    strong_experiment,
    strong_implies_nm_check,
    tamper_experiment,
    tamper_experiment_reference,
)
from nmcode.outcomes import bot_index, patch, same_index, statistical_distance
from nmcode.simulators import (
    c1_case,
    c1_case_failure,
    simulate,
    simulator_c1,
    simulator_c2,
    simulator_digest,
)
from nmcode.tamper import (
    BitAction,
    constant_function,
    distinguisher_set,
    identity_function,
    make_tamper,
    privacy_breaker,
    tamper_sample,
)

from test_lecss import SIMPLEX_EVEN

K, F = int(BitAction.KEEP), int(BitAction.FLIP)


@pytest.fixture(scope='module')
def c1_code():
    """Construction 1 over the 7-bit simplex/even-weight LECSS with AMD (1,1)."""
    lecss = lecss_from_generator(FieldMatrix(GF2, SIMPLEX_EVEN), inner_dim=3)
    return construction1(lecss, amd_build(1, 1), rho_r=Fraction(1, 7), rho_w=1)


def test_extended_hamming_instance(ext_hamming_c2):
    code = ext_hamming_c2
    assert (code.n, code.k) == (16, 1)
    assert code.randomness_size == 4 * 2 ** 11
    assert code.claimed_security == Fraction(1, 2)


def test_roundtrip(ext_hamming_c2):
    code = ext_hamming_c2
    rng = np.random.default_rng(0)
    for m in (0, 1):
        bits = FieldVector(GF2, [m])
        for _ in range(20):
            inner = FieldVector(GF2, rng.integers(0, 2, size=code.inner_randomness_dim))
            x = nm_encode(code, bits, int(rng.integers(0, 4)), inner)
            assert nm_decode(code, x).index(1) == m


def test_identity_tampering_is_a_point_mass(ext_hamming_c2):
    f = identity_function(16)
    for m in (0, 1):
        assert tamper_experiment(ext_hamming_c2, f, m).probability(m) == 1
        assert strong_experiment(ext_hamming_c2, f, m).probability(same_index(1)) == 1


def test_fast_path_matches_reference(ext_hamming_c2):
    f = tamper_sample(16, Fraction(1, 16), Fraction(6, 16), seed=4)
    assert tamper_experiment(ext_hamming_c2, f, 1) == tamper_experiment_reference(ext_hamming_c2, f, 1)


def test_exact_sd_within_bound_in_regime(ext_hamming_c2):
    """ρ = 7/16 >= ρr + ρw with ρr = 1/16, ρw = 6/16."""
    code = ext_hamming_c2
    for seed in range(4):
        f = tamper_sample(16, Fraction(1, 16), Fraction(6, 16), seed=seed)
        d_f = simulator_c2(code, f)
        for m in (0, 1):
            sd = statistical_distance(tamper_experiment(code, f, m), patch(d_f, m))
            assert sd <= code.claimed_security, f"seed {seed}, m={m}: SD {sd}"


def test_simulator_never_sees_the_message(ext_hamming_c2):
    """D_f is built from f alone: rebuilding it gives the same bytes."""
    f = tamper_sample(16, Fraction(1, 16), Fraction(6, 16), seed=2)
    first = simulator_digest(simulate(ext_hamming_c2, f))
    assert simulator_digest(simulate(ext_hamming_c2, f)) == first


def test_montecarlo_simulator_is_seeded(ext_hamming_c2):
    f = tamper_sample(16, Fraction(1, 16), Fraction(6, 16), seed=1)
    a = simulator_c2(ext_hamming_c2, f, mode=MONTECARLO, samples=5000, seed=3)
    b = simulator_c2(ext_hamming_c2, f, mode=MONTECARLO, samples=5000, seed=3)
    assert a == b
    assert a.samples == 5000


def test_read_nothing_single_flip(ext_hamming_c2):
    """A lone flip is never a codeword offset, so D_f is a point mass on ⊥."""
    f = make_tamper(16, (), (0,), [[F]])
    d_f = simulator_c2(ext_hamming_c2, f)
    assert d_f.probability(bot_index(1)) == 1
    for m in (0, 1):
        t_m = tamper_experiment(ext_hamming_c2, f, m)
        assert statistical_distance(t_m, patch(d_f, m)) <= ext_hamming_c2.claimed_security
    sampled = simulator_c2(ext_hamming_c2, f, mode=MONTECARLO, samples=1000, seed=2)
    assert sampled.samples == 1000


def test_strong_implies_nm(ext_hamming_c2):
    f = tamper_sample(16, Fraction(1, 16), Fraction(6, 16), seed=6)
    assert strong_implies_nm_check(ext_hamming_c2, f)['holds']


def test_agreement_on_identity(ext_hamming_c2):
    report = agreement_check(ext_hamming_c2, identity_function(16), 0, samples=2000, seed=1)
    assert report['agrees']
    assert report['max_deviation'] == 0


def test_h5_explicit_family_parameters():
    """[31,26] Hamming with AMD (1,2): ρ = 15/31, small-ρw lemma at ρr = 5/31, ρw = 10/31."""
    code = hamming_construction2(5, k=1, u=2, rho_r=Fraction(5, 31), rho_w=Fraction(10, 31))
    assert code.n == 31
    assert code.inner.rho == Fraction(15, 31)
    assert code.regime.verdict == 'construction 2 small-rho_w lemma'
    assert code.claimed_security == Fraction(1, 2)


def test_outside_regime_is_labelled():
    code = hamming_construction2(5, k=1, u=2, rho_r=Fraction(10, 31), rho_w=Fraction(10, 31))
    assert code.regime.verdict == NOT_GUARANTEED
    assert code.regime.notes


def test_mismatched_amd_length():
    with pytest.raises(CodeError):
        hamming_construction2(3, k=1, u=2)


def test_privacy_breaker_against_identity_code():
    """A view gap of 1 on S_r = {0} becomes a same* gap of exactly 1."""
    code = IdentityCode()
    view0 = np.bincount(code.encode_indices(0, np.arange(1))[:, 0], minlength=2)
    view1 = np.bincount(code.encode_indices(1, np.arange(1))[:, 0], minlength=2)
    breaker = privacy_breaker(distinguisher_set(view0, view1), [0], n=1)
    same0 = strong_experiment(code, breaker, 0).probability(same_index(1))
    same1 = strong_experiment(code, breaker, 1).probability(same_index(1))
    assert abs(same0 - same1) == 1


# --- Construction 1 ---

def test_c1_regime(c1_code):
    assert (c1_code.inner.t, c1_code.inner.d) == (2, 2)
    assert c1_code.regime.verdict == 'construction 1 theorem'
    assert c1_code.randomness_size == 2 * 8


def test_c1_subcode_offset_is_same_star(c1_code):
    """Adding a codeword of C leaves the message unchanged."""
    actions = [F if b else K for b in SIMPLEX_EVEN[0]]
    f = constant_function(7, actions)
    d_f = simulator_c1(c1_code, f)
    assert d_f.probability(same_index(1)) == 1
    for m in (0, 1):
        assert statistical_distance(tamper_experiment(c1_code, f, m), patch(d_f, m)) == 0


def test_c1_light_offset_is_bot(c1_code):
    f = constant_function(7, [F] + [K] * 6)
    d_f = simulator_c1(c1_code, f)
    assert d_f.probability(bot_index(1)) == 1
    assert tamper_experiment(c1_code, f, 0).probability(bot_index(1)) == 1


def test_c1_middle_cases_within_bound(c1_code):
    """Undetected mass of the middle overwrite cases is below the failure expression."""
    for seed in range(10):
        f = tamper_sample(7, Fraction(1, 7), 1, seed=seed)
        for m in (0, 1):
            result = c1_case_failure(c1_code, f, m)
            assert result['mass'] <= result['bound']
            assert result['mass'] <= result['middle_mass']


def test_c1_case_split(c1_code):
    """t' = 2, n = 7: one read leaves case 1 for at most one overwrite."""
    assert c1_case(c1_code, 1, 1) == 1
    assert c1_case(c1_code, 2, 1) == 2
    assert c1_case(c1_code, 5, 1) == 4


def test_c1_out_of_regime_adversary(c1_code):
    f = tamper_sample(7, Fraction(2, 7), 1, seed=0)
    with pytest.raises(RegimeError, match='outside regime'):
        simulator_c1(c1_code, f)
