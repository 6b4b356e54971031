"""
Batch front end.

    nmcode code build   --construction 2 --h 4 --extended
    nmcode amd audit    --k 3 --u 3
    nmcode wt audit     --h 3 --set-size 3
    nmcode lecss verify --n 12 --ell 5 --r 4 --code-seed 1
    nmcode nm audit     --construction 2 --h 5 --adversaries 1000 --mode montecarlo --seed 7
    nmcode smt run      --q 16 --n 5 --t 1 --k 2 --adversaries 500 --mode montecarlo
    nmcode bounds capacity --rho-r 0.25

Exit status: 0 every measured quantity within its bound, 1 a bound was
exceeded (beyond Monte Carlo slack, inside a covered regime), 2 error.
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import __version__, config as env
from .amd import amd_build, amd_exhaustive_oracle
from .audit import nm_security_audit
from .audit_logger import get_audit_logger, init_audit_logger
from .bounds import bounds_calculator
from .run_config import RunConfig, apply_flags, load_config
from .errors import NmCodeError
from .field_linalg import get_field
from .lecss import check_definition, cross_check, lecss_build_random
from .linear_codes import extended_hamming_code, hamming_code
from .nmc import NmCode, construction1, hamming_construction2
from .reports import emit_report, record_run, record_session
from .smtsim import smt_build, smt_nm_audit, smt_secrecy_audit, smt_transmit
from .tamper import ao_identity
from .wiretap import wt_build, wt_verify_privacy

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_ERROR = 2


def _ok(message: str):
    print(f"✓ {message}", file=sys.stderr)


def _fail(message: str):
    print(f"✗ {message}", file=sys.stderr)


def _rate(value) -> Fraction:
    return Fraction(value).limit_denominator(1 << 20)


# --- code builders shared by the commands ---

def _inner_code(cfg: RunConfig):
    return extended_hamming_code(cfg.h) if cfg.extended else hamming_code(cfg.h)


def _rho_w(cfg: RunConfig, default) -> Fraction:
    return _rate(cfg.rho_w) if cfg.rho_w is not None else _rate(default)


def build_code(cfg: RunConfig) -> NmCode:
    """Construction 2 over a (extended) Hamming coset code, or Construction 1 over a random LECSS."""
    rho_r = _rate(cfg.rho_r)
    if cfg.construction == 2:
        wt = wt_build(_inner_code(cfg), cfg.code_seed)
        rho_w = _rho_w(cfg, max(Fraction(0), wt.rho - rho_r))
        return hamming_construction2(cfg.h, k=cfg.k, u=cfg.u, seed=cfg.code_seed, extended=cfg.extended,
                                     rho_r=rho_r, rho_w=rho_w)
    lecss = lecss_build_random(cfg.n, cfg.k + 2 * cfg.u, cfg.r, cfg.code_seed)
    return construction1(lecss, amd_build(cfg.k, cfg.u), rho_r=rho_r, rho_w=_rho_w(cfg, 1))


# --- commands; each returns (report, violated, summary line) ---

def cmd_code_build(cfg: RunConfig) -> Tuple[object, bool, str]:
    code = build_code(cfg)
    report = {
        'code_params': code.to_dict(),
        'regime': code.regime.to_dict(),
        'claimed_bound': code.claimed_security,
    }
    if cfg.construction == 1:
        report['lecss'] = code.inner.to_text()
    return report, False, f"built {code.name}: claimed bound {code.claimed_security}, {code.regime.verdict}"


def cmd_amd_audit(cfg: RunConfig):
    code = amd_build(cfg.k, cfg.u)
    report = amd_exhaustive_oracle(code)
    summary = (f"AMD k={cfg.k} u={cfg.u}: max failure {report.detection_failure} "
               f"{'<=' if report.within_bound else '>'} delta {code.delta}")
    return report, not report.within_bound, summary


def cmd_wt_audit(cfg: RunConfig):
    wt = wt_build(_inner_code(cfg), cfg.code_seed)
    private = int(wt.rho * wt.n)
    set_size = private if cfg.set_size is None else cfg.set_size
    report = wt_verify_privacy(wt, set_size, mode=cfg.mode, samples=cfg.samples, seed=cfg.seed)
    covered = set_size <= private
    violated = covered and report.max_sd > float(wt.epsilon) + report.half_width
    sd = report.exact_max_sd if report.exact_max_sd is not None else report.max_sd
    return report, violated, f"{wt.code.name}: max SD {sd} over |S| <= {set_size} (private up to {private})"


def cmd_lecss_verify(cfg: RunConfig):
    code = lecss_build_random(cfg.n, cfg.ell, cfg.r, cfg.code_seed)
    checks = cross_check(code)
    report = {
        'code_params': code.to_dict(),
        'cross_check': checks,
        'generator': code.to_text(),
    }
    if code.n <= 20:
        report['definition'] = check_definition(code, seed=cfg.seed)
    violated = not (checks['t_agrees'] and checks['d_agrees'])
    if 'definition' in report:
        violated = violated or not all(report['definition'][c] for c in ('distance_clause', 'linearity_clause'))
    return report, violated, f"LECSS n={code.n} ell={code.ell} r={code.inner_dim}: (d,t) = ({code.d},{code.t})"


def cmd_nm_audit(cfg: RunConfig):
    code = build_code(cfg)
    rho_w = _rate(cfg.rho_w) if cfg.rho_w is not None else _rate(code.regime.params['rho_w'])
    report = nm_security_audit(code, adversary_count=cfg.adversaries, rho_r=_rate(cfg.rho_r),
                               rho_w=rho_w, sampler=cfg.sampler, mode=cfg.mode, seed=cfg.seed,
                               samples=cfg.samples)
    summary = (f"{code.name}: max SD {report.to_dict()['max_sd']} vs claimed {report.to_dict()['claimed_bound']} "
               f"over {len(report.per_adversary)} adversaries ({code.regime.verdict})")
    return report, report.violated, summary


def cmd_smt_run(cfg: RunConfig):
    if cfg.q < 4 or cfg.q & (cfg.q - 1):
        raise NmCodeError(f"q: expected a power of two >= 4, got {cfg.q}")
    protocol = smt_build(get_field(cfg.q.bit_length() - 1), cfg.n, cfg.t, cfg.k, seed=cfg.code_seed)
    set_size = cfg.t if cfg.set_size is None else cfg.set_size
    secrecy = smt_secrecy_audit(protocol, set_size, mode=cfg.mode, samples=cfg.samples, seed=cfg.seed)
    nm = smt_nm_audit(protocol, adversary_count=cfg.adversaries, sampler=cfg.sampler, mode=cfg.mode,
                      samples=cfg.samples, seed=cfg.seed)
    session = smt_transmit(protocol, 0, ao_identity(protocol.field, protocol.n), seed=cfg.seed)
    secrecy_broken = set_size <= protocol.t and secrecy.max_sd > float(protocol.epsilon) + secrecy.half_width
    report = {
        'protocol': protocol.to_dict(),
        'secrecy': secrecy.to_dict(),
        'nm': nm.to_dict(),
        'session': session.to_dict(),
    }
    summary = (f"SMT GF({cfg.q}) n={cfg.n} t={cfg.t}: secrecy SD {secrecy.to_dict()['max_sd']} at |S|={set_size}, "
               f"NM max SD {nm.to_dict()['max_sd']} vs {nm.to_dict()['claimed_bound']}")
    return report, secrecy_broken or nm.violated, summary, session


def cmd_bounds(cfg: RunConfig):
    params: Dict = {'rho_r': _rate(cfg.rho_r), 'epsilon': _rate(cfg.epsilon)}
    if cfg.query == 'capacity':
        params['rho_w'] = _rho_w(cfg, 1)
    elif cfg.query == 'regime':
        params['construction'] = cfg.construction
        params['rho_w'] = _rho_w(cfg, 1)
        if cfg.construction == 2:
            params['rho'] = _rate(cfg.rho) if cfg.rho is not None else None
        else:
            params.update(t=cfg.t_prime, d=cfg.d_prime, n=cfg.n)
    else:
        params['delta'] = _rate(cfg.delta) if cfg.delta is not None else None
        if cfg.query == 'c1_security':
            params.update(t=cfg.t_prime, d=cfg.d_prime, n=cfg.n)
    missing = [name for name, value in params.items() if value is None]
    if missing:
        flag = {'t': 't-prime', 'd': 'd-prime'}.get(missing[0], missing[0].replace('_', '-'))
        raise NmCodeError(f"bounds {cfg.query}: missing --{flag}")
    result = bounds_calculator(cfg.query, **params)
    value = result['value']
    if isinstance(value, (Fraction, float, int)):
        print(f"{float(value):g}")
    else:
        print(result['verdict'])
    return result, False, f"bounds {cfg.query}: {result['verdict']}"


COMMAND_TABLE = {
    'code build': cmd_code_build,
    'amd audit': cmd_amd_audit,
    'wt audit': cmd_wt_audit,
    'lecss verify': cmd_lecss_verify,
    'nm audit': cmd_nm_audit,
    'smt run': cmd_smt_run,
    'bounds': cmd_bounds,
}


def run_command(cfg: RunConfig) -> int:
    """
    Run one validated configuration, emit its report and record it.

    Returns:
        0 bound respected, 1 bound violated, 2 error
    """
    audit_log = get_audit_logger()
    try:
        cfg.validate()
        result = COMMAND_TABLE[cfg.command](cfg)
        report, violated, summary = result[:3]
        if cfg.command != 'bounds' or cfg.out:
            emit_report(report, cfg.format, cfg.out)
        verdict = 'violated' if violated else 'respected'
        run_id = record_run(cfg.command, cfg, report, verdict)
        if len(result) > 3:
            record_session(result[3], run_id=run_id)
    except NmCodeError as e:
        _fail(str(e))
        audit_log.error(f"{cfg.command} failed", {'error': str(e)})
        return EXIT_ERROR
    except OSError as e:
        _fail(f"I/O error: {e}")
        audit_log.error(f"{cfg.command} failed", {'error': str(e)})
        return EXIT_ERROR

    if violated:
        _fail(summary)
    else:
        _ok(summary)
    audit_log.info(f"{cfg.command} finished", {'verdict': verdict, 'seed': cfg.seed, 'mode': cfg.mode})
    return EXIT_VIOLATED if violated else EXIT_OK


# --- argument parsing ---

def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--config', help='JSON run configuration (flags override it)')
    parent.add_argument('--construction', type=int, choices=(1, 2))
    parent.add_argument('--h', type=int, help='Hamming parameter (n = 2^h - 1, or 2^h with --extended)')
    parent.add_argument('--extended', action='store_true', default=None, help='Use the extended Hamming code')
    parent.add_argument('--n', type=int, help='Code length / number of wires')
    parent.add_argument('--k', type=int, help='Message length in bits')
    parent.add_argument('--u', type=int, help='AMD tag degree')
    parent.add_argument('--ell', type=int, help='LECSS message length')
    parent.add_argument('--r', type=int, help='LECSS randomness dimension')
    parent.add_argument('--q', type=int, help='SMT wire alphabet size (power of two)')
    parent.add_argument('--t', type=int, help='SMT corrupted-wire budget')
    parent.add_argument('--code-seed', type=int, help='Seed for code construction')
    parent.add_argument('--rho-r', type=float, help='Read fraction')
    parent.add_argument('--rho-w', type=float, help='Write fraction')
    parent.add_argument('--adversaries', type=int, help='Number of sampled adversaries')
    parent.add_argument('--sampler', choices=('uniform', 'structured', 'mixed'))
    parent.add_argument('--set-size', type=int, help='Reading/wire set size for privacy audits')
    parent.add_argument('--epsilon', type=float)
    parent.add_argument('--delta', type=float)
    parent.add_argument('--rho', type=float)
    parent.add_argument('--t-prime', type=int, help="LECSS uniformity t'")
    parent.add_argument('--d-prime', type=int, help="LECSS distance d'")
    parent.add_argument('--mode', choices=('exact', 'montecarlo'))
    parent.add_argument('--samples', type=int, help='Monte Carlo samples per distribution')
    parent.add_argument('--seed', type=int, help='Global seed')
    parent.add_argument('--out', help='Report path (stdout when omitted)')
    parent.add_argument('--format', choices=('json', 'csv'))
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='nmcode', description='Non-malleable codes for leaky bitwise tampering')
    parser.add_argument('--version', action='version', version=f'nmcode {__version__}')
    common = _common_flags()
    groups = parser.add_subparsers(dest='group', required=True)
    for group, actions in (('code', ('build',)), ('amd', ('audit',)), ('wt', ('audit',)),
                           ('lecss', ('verify',)), ('nm', ('audit',)), ('smt', ('run',))):
        sub = groups.add_parser(group).add_subparsers(dest='action', required=True)
        for action in actions:
            sub.add_parser(action, parents=[common])
    bounds = groups.add_parser('bounds', parents=[common])
    bounds.add_argument('query', choices=('capacity', 'c1_security', 'c2_security', 'regime'))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = load_config(args.config) if args.config else RunConfig()
    flags = {key: value for key, value in vars(args).items() if key not in ('config', 'group', 'action')}
    flags['command'] = 'bounds' if args.group == 'bounds' else f"{args.group} {args.action}"
    return apply_flags(base, flags)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=getattr(logging, env['LOG_LEVEL'], logging.INFO),
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    args = build_parser().parse_args(argv)
    command = 'bounds' if args.group == 'bounds' else f"{args.group} {args.action}"
    audit_log = init_audit_logger(command, env['LOG_FILE'], env['LOG_LEVEL'])
    try:
        cfg = config_from_args(args)
    except NmCodeError as e:
        _fail(str(e))
        audit_log.shutdown()
        return EXIT_ERROR
    status = run_command(cfg)
    audit_log.shutdown()
    return status
