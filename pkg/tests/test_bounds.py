"""
Tests for the reference calculators and regime verdicts.
"""

import math
from fractions import Fraction

import pytest

from nmcode.bounds import (
    NOT_GUARANTEED,
    appendix_bound,
    bounds_calculator,
    c1_regime,
    c1_security,
    c2_regime,
    c2_security,
    capacity,
)
from nmcode.errors import NmCodeError


def test_capacity():
    assert capacity(Fraction(1, 4))['capacity'] == Fraction(3, 4)
    assert capacity(0.25)['capacity'] == Fraction(3, 4)
    assert capacity(Fraction(1, 4))['exact']


def test_capacity_when_reads_exceed_writes():
    result = capacity(Fraction(1, 2), Fraction(1, 4))
    assert result['capacity'] == Fraction(1, 2)
    assert not result['exact']
    assert result['notes']


def test_c2_security():
    assert c2_security(0, Fraction(3, 8)) == Fraction(3, 8)
    assert c2_security(Fraction(1, 16), Fraction(1, 4)) == Fraction(3, 8)


def test_c2_regimes():
    assert c2_regime(Fraction(3, 5), Fraction(1, 5), 1).verdict == 'construction 2 theorem'
    assert c2_regime(Fraction(7, 16), Fraction(1, 16), Fraction(6, 16)).verdict == \
        'construction 2 small-rho_w lemma'
    regime = c2_regime(Fraction(7, 16), Fraction(1, 4), Fraction(1, 4))
    assert regime.verdict == NOT_GUARANTEED
    assert not regime.guaranteed
    assert regime.checks == {'rho >= (1+rho_r)/2': False, 'rho >= rho_r+rho_w': False}


def test_c1_regimes():
    assert c1_regime(2, 2, 7, Fraction(1, 7), 1).verdict == 'construction 1 theorem'
    assert c1_regime(1, 2, 7, Fraction(1, 7), 1).verdict == NOT_GUARANTEED


def test_appendix_bound_infinite_without_gap():
    assert appendix_bound(2, 4, 16, Fraction(1, 8)) == math.inf
    assert appendix_bound(6, 1, 16, Fraction(1, 8)) == math.inf


def test_appendix_bound_value():
    """gap 4, margin 1/2 - 7/32 on n = 16."""
    margin = 0.5 - 7 / 32
    expected = 2.0 ** -4 + (4 / (16 * margin * margin)) ** 2
    assert appendix_bound(6, 8, 16, Fraction(1, 8)) == pytest.approx(expected)
    assert c1_security(Fraction(1, 2), 6, 8, 16, Fraction(1, 8)) == pytest.approx(max(0.5, expected))


def test_calculator_queries():
    assert bounds_calculator('capacity', rho_r=Fraction(1, 4))['value'] == Fraction(3, 4)
    assert bounds_calculator('c2_security', delta=Fraction(1, 4))['value'] == Fraction(1, 4)
    regime = bounds_calculator('regime', rho=Fraction(7, 16), rho_r=Fraction(1, 2), rho_w=Fraction(1, 2))
    assert regime['verdict'] == NOT_GUARANTEED
    with pytest.raises(NmCodeError):
        bounds_calculator('rate')


def test_rates_must_be_fractions_of_one():
    with pytest.raises(NmCodeError, match="rho_r"):
        capacity(Fraction(3, 2))
