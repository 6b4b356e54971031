"""
Non-malleability audit: measured SD(Tamper_m^f, Patch(D_f, m)) against the
construction's claimed bound, over a set of adversaries and messages.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .audit_logger import get_audit_logger
from .errors import RegimeError
from .nmc import MONTECARLO, NmCode, Tamper, tamper_experiment
from .outcomes import EXACT, patch, statistical_distance
from .simulators import simulate, simulator_digest
from .tamper import STRUCTURED, UNIFORM, ao_sample, tamper_sample
from .workers import derive_seed

logger = logging.getLogger(__name__)

MAX_AUDITED_MESSAGES = 16
HISTOGRAM_BINS = 10

Number = Union[Fraction, float]


def format_number(value: Number) -> Union[str, float]:
    """Fractions as 'p/q' strings, floats rounded for byte-stable output."""
    if isinstance(value, Fraction):
        return str(value)
    return round(float(value), 10)


@dataclass
class AdversaryResult:
    f_digest: str
    name: str
    max_sd: Number
    worst_m: int
    slack: float
    simulator_digest: str
    simulator_independent: bool
    skipped: Optional[str] = None

    def to_dict(self) -> Dict:
        out = {
            'f_digest': self.f_digest,
            'max_sd': format_number(self.max_sd),
            'worst_m': self.worst_m,
            'name': self.name,
            'slack': format_number(self.slack),
            'simulator_digest': self.simulator_digest,
            'simulator_independent': self.simulator_independent,
        }
        if self.skipped:
            out['skipped'] = self.skipped
        return out


@dataclass
class AuditReport:
    code_params: Dict
    regime: Dict
    claimed_bound: Number
    per_adversary: List[AdversaryResult]
    max_sd: Number
    mode: str
    seed: int
    samples: int
    slack: float = 0.0
    histogram: List[int] = dc_field(default_factory=list)
    notes: List[str] = dc_field(default_factory=list)

    @property
    def exceeded(self) -> bool:
        return any(r.skipped is None and r.max_sd > self.claimed_bound + r.slack
                   for r in self.per_adversary)

    @property
    def guaranteed(self) -> bool:
        return self.regime.get('verdict') != 'not guaranteed'

    @property
    def violated(self) -> bool:
        """A measured distance beyond bound + slack inside a covered regime."""
        return self.exceeded and self.guaranteed

    @property
    def simulator_independent(self) -> bool:
        return all(r.simulator_independent for r in self.per_adversary)

    def to_dict(self) -> Dict:
        return {
            'code_params': self.code_params,
            'regime': self.regime,
            'claimed_bound': format_number(self.claimed_bound),
            'per_adversary': [r.to_dict() for r in self.per_adversary],
            'max_sd': format_number(self.max_sd),
            'mode': self.mode,
            'seed': self.seed,
            'samples': self.samples,
            'slack': format_number(self.slack),
            'histogram': list(self.histogram),
            'within_bound': not self.exceeded,
            'simulator_independent': self.simulator_independent,
            'notes': list(self.notes),
        }


def sample_adversaries(code, count: int, rho_r, rho_w, sampler: str, seed: int) -> List[Tamper]:
    """
    Draw `count` adversaries; 'mixed' alternates uniform and structured
    draws. q-ary codes get F_AO adversaries (ρw is then 1).
    """
    out = []
    for i in range(count):
        mode = sampler if sampler != 'mixed' else (UNIFORM if i % 2 == 0 else STRUCTURED)
        child = derive_seed(seed, 'adversary', i)
        if code.field.q > 2:
            out.append(ao_sample(code.field, code.n, rho_r, mode=mode, seed=child))
        else:
            out.append(tamper_sample(code.n, rho_r, rho_w, mode=mode, seed=child))
    return out


def _audited_messages(code, seed: int) -> List[int]:
    total = 1 << code.k
    if total <= MAX_AUDITED_MESSAGES:
        return list(range(total))
    rng = np.random.default_rng(derive_seed(seed, 'messages'))
    return sorted(int(m) for m in rng.choice(total, size=MAX_AUDITED_MESSAGES, replace=False))


def nm_security_audit(code: NmCode, adversaries: Optional[Sequence[Tamper]] = None,
                      adversary_count: int = 0, rho_r=0, rho_w=0, sampler: str = UNIFORM,
                      mode: str = EXACT, seed: int = 0, samples: int = 100_000,
                      recheck_simulator: bool = True) -> AuditReport:
    """
    Audit non-malleability of `code`.

    Args:
        code: Construction 1 or 2 instance
        adversaries: Explicit adversaries; sampled from (ρr, ρw) when omitted
        adversary_count: Number of adversaries to sample
        rho_r: Read fraction for sampling
        rho_w: Write fraction for sampling
        sampler: 'uniform', 'structured' or 'mixed'
        mode: 'exact' or 'montecarlo'
        seed: Root of the seed tree (adversary i, experiment (i, m), simulator i)
        samples: Samples per empirical distribution in Monte Carlo mode
        recheck_simulator: Rebuild D_f for every audited message and compare bytes

    Returns:
        AuditReport; identical arguments give an identical report
    """
    audit_log = get_audit_logger()
    if adversaries is None:
        adversaries = sample_adversaries(code, adversary_count, rho_r, rho_w, sampler, seed)
    messages = _audited_messages(code, seed)
    claimed = code.claimed_security
    histogram = [0] * HISTOGRAM_BINS
    results: List[AdversaryResult] = []
    worst_overall: Number = Fraction(0) if mode == EXACT else 0.0
    worst_slack = 0.0

    for i, f in enumerate(adversaries):
        sim_seed = derive_seed(seed, 'simulator', i)
        try:
            d_f = simulate(code, f, mode=mode, samples=samples, seed=sim_seed)
        except RegimeError as e:
            results.append(AdversaryResult(f.digest(), f.name, Fraction(0), -1, 0.0, '', True, skipped=str(e)))
            continue
        digest = simulator_digest(d_f)
        independent = True
        worst = (Fraction(0) if mode == EXACT else 0.0, messages[0])
        adversary_slack = 0.0
        for m in messages:
            if recheck_simulator and m != messages[0]:
                again = simulate(code, f, mode=mode, samples=samples, seed=sim_seed)
                independent = independent and simulator_digest(again) == digest
            t_m = tamper_experiment(code, f, m, mode=mode, samples=samples,
                                    seed=derive_seed(seed, 'experiment', i, m))
            patched = patch(d_f, m)
            # exact Construction 1 simulators meet sampled experiments in montecarlo mode
            sd = statistical_distance(t_m, patched, allow_mixed=t_m.mode != patched.mode)
            slack = t_m.half_width() + d_f.half_width()
            histogram[min(HISTOGRAM_BINS - 1, int(float(sd) * HISTOGRAM_BINS))] += 1
            if sd > worst[0]:
                worst = (sd, m)
            adversary_slack = max(adversary_slack, slack)
        worst_slack = max(worst_slack, adversary_slack)
        results.append(AdversaryResult(f.digest(), f.name, worst[0], worst[1], adversary_slack,
                                       digest, independent))
        if worst[0] > worst_overall:
            worst_overall = worst[0]
        if worst[0] > claimed + adversary_slack:
            audit_log.warning(f"adversary {i} exceeds the claimed bound",
                              {'f_digest': f.digest(), 'sd': float(worst[0]), 'bound': float(claimed)})

    regime = getattr(code, 'regime', None)
    report = AuditReport(
        code_params=code.to_dict(),
        regime=regime.to_dict() if regime else {},
        claimed_bound=claimed,
        per_adversary=results,
        max_sd=worst_overall,
        mode=mode,
        seed=seed,
        samples=samples if mode == MONTECARLO else 0,
        slack=worst_slack,
        histogram=histogram,
        notes=list(regime.notes) if regime else [],
    )
    audit_log.info("nm audit finished", {
        'code': code.to_dict().get('name', ''),
        'adversaries': len(results),
        'max_sd': float(worst_overall),
        'claimed': float(claimed),
        'within_bound': not report.exceeded,
    })
    return report
