"""
Reference calculators: capacities, the security bounds of both
constructions and their parameter regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Union

from .errors import NmCodeError

Rate = Union[Fraction, float, int]

NOT_GUARANTEED = 'not guaranteed'


def _frac(value: Rate) -> Fraction:
    return Fraction(value).limit_denominator(1 << 30)


def _check_unit(name: str, value: Rate) -> Fraction:
    value = _frac(value)
    if not 0 <= value <= 1:
        raise NmCodeError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass
class Regime:
    """Which result covers a parameter point, with the inequalities checked."""

    construction: str
    verdict: str
    checks: Dict[str, bool]
    params: Dict[str, str]
    notes: List[str] = dc_field(default_factory=list)

    @property
    def guaranteed(self) -> bool:
        return self.verdict != NOT_GUARANTEED

    def to_dict(self) -> Dict:
        return {
            'construction': self.construction,
            'verdict': self.verdict,
            'checks': dict(self.checks),
            'params': dict(self.params),
            'notes': list(self.notes),
        }


def capacity(rho_r: Rate, rho_w: Rate = 1) -> Dict:
    """
    1 - ρr. For ρw = 1 (and for strong codes) this is the capacity; for
    ρr <= ρw it is the capacity of default NM codes. When ρr > ρw only the
    lower bound is known.
    """
    rho_r, rho_w = _check_unit('rho_r', rho_r), _check_unit('rho_w', rho_w)
    result = {'capacity': 1 - rho_r, 'exact': True, 'notes': []}
    if rho_r > rho_w:
        result['exact'] = False
        result['notes'].append('upper bound unknown for rho_r > rho_w; 1 - rho_r is a lower bound')
    return result


def c2_security(epsilon: Rate, delta: Rate) -> Fraction:
    """2ε + δ."""
    return 2 * _frac(epsilon) + _frac(delta)


def appendix_bound(t: int, d: int, n: int, rho_r: Rate) -> float:
    """
    Failure mass of the middle overwrite cases of Construction 1:
    1/2^(t'-nρr) + ((t'-nρr) / (n (d'/n - (1-ρr)/4)^2))^((t'-nρr)/2).
    Infinite when t' <= nρr or d'/n <= (1-ρr)/4.
    """
    rho_r = _check_unit('rho_r', rho_r)
    gap = t - n * float(rho_r)
    margin = d / n - (1 - float(rho_r)) / 4
    if gap <= 0 or margin <= 0:
        return math.inf
    return 2.0 ** (-gap) + (gap / (n * margin * margin)) ** (gap / 2)


def c1_security(delta: Rate, t: int, d: int, n: int, rho_r: Rate) -> float:
    """max{δ, appendix bound}."""
    return max(float(_frac(delta)), appendix_bound(t, d, n, rho_r))


def c2_regime(rho: Rate, rho_r: Rate, rho_w: Rate) -> Regime:
    rho, rho_r, rho_w = _frac(rho), _check_unit('rho_r', rho_r), _check_unit('rho_w', rho_w)
    checks = {
        'rho >= (1+rho_r)/2': rho >= (1 + rho_r) / 2,
        'rho >= rho_r+rho_w': rho >= rho_r + rho_w,
    }
    if checks['rho >= (1+rho_r)/2']:
        verdict = 'construction 2 theorem'
    elif checks['rho >= rho_r+rho_w']:
        verdict = 'construction 2 small-rho_w lemma'
    else:
        verdict = NOT_GUARANTEED
    return Regime('construction2', verdict, checks,
                  {'rho': str(rho), 'rho_r': str(rho_r), 'rho_w': str(rho_w)})


def c1_regime(t: int, d: int, n: int, rho_r: Rate, rho_w: Rate) -> Regime:
    rho_r, rho_w = _check_unit('rho_r', rho_r), _check_unit('rho_w', rho_w)
    checks = {
        "t' > n*rho_r": t > n * rho_r,
        "d' > n(1-rho_r)/4": d > n * (1 - rho_r) / 4,
        "d' > n*rho_w/2": d > n * rho_w / 2,
    }
    if checks["t' > n*rho_r"] and checks["d' > n(1-rho_r)/4"]:
        verdict = 'construction 1 theorem'
    elif checks["t' > n*rho_r"] and checks["d' > n*rho_w/2"]:
        verdict = 'construction 1 small-rho_w lemma'
    else:
        verdict = NOT_GUARANTEED
    return Regime('construction1', verdict, checks,
                  {'t': str(t), 'd': str(d), 'n': str(n), 'rho_r': str(rho_r), 'rho_w': str(rho_w)})


def bounds_calculator(query: str, **params) -> Dict:
    """
    Single entry point for the reference calculators.

    Args:
        query: 'capacity', 'c1_security', 'c2_security' or 'regime'
        params: rho_r, rho_w, epsilon, delta, t, d, n, rho, construction

    Returns:
        {'query', 'value', 'verdict', 'notes'}
    """
    if query == 'capacity':
        result = capacity(params['rho_r'], params.get('rho_w', 1))
        verdict = 'exact' if result['exact'] else 'lower bound only'
        return {'query': query, 'value': result['capacity'], 'verdict': verdict, 'notes': result['notes']}
    if query == 'c2_security':
        value = c2_security(params.get('epsilon', 0), params['delta'])
        return {'query': query, 'value': value, 'verdict': 'exact security 2*epsilon+delta', 'notes': []}
    if query == 'c1_security':
        value = c1_security(params['delta'], params['t'], params['d'], params['n'], params['rho_r'])
        regime = c1_regime(params['t'], params['d'], params['n'], params['rho_r'], params.get('rho_w', 1))
        return {'query': query, 'value': value, 'verdict': regime.verdict,
                'notes': ['vacuous (>= 1)'] if value >= 1 else []}
    if query == 'regime':
        if params.get('construction', 2) in (1, '1'):
            regime = c1_regime(params['t'], params['d'], params['n'], params['rho_r'], params.get('rho_w', 1))
        else:
            regime = c2_regime(params['rho'], params['rho_r'], params.get('rho_w', 1))
        return {'query': query, 'value': regime.checks, 'verdict': regime.verdict, 'notes': regime.notes}
    raise NmCodeError(f"unknown bounds query: {query}")
