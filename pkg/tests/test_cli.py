"""
End-to-end tests for the nmcode command line.
"""

import json

import pytest

from nmcode.cli import EXIT_ERROR, EXIT_OK, EXIT_VIOLATED, main


def test_bounds_capacity(capsys):
    assert main(['bounds', 'capacity', '--rho-r', '0.25']) == EXIT_OK
    assert capsys.readouterr().out.strip() == '0.75'


def test_bounds_missing_parameter(capsys):
    assert main(['bounds', 'c2_security']) == EXIT_ERROR
    assert 'missing --delta' in capsys.readouterr().err


def test_amd_audit_respects_bound(capsys):
    assert main(['amd', 'audit', '--k', '3', '--u', '3']) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report['within_bound']
    assert report['claimed_bound'] == '1/4'


def test_reports_are_byte_identical(tmp_path):
    args = ['nm', 'audit', '--h', '4', '--extended', '--rho-r', '0.0625', '--rho-w', '0.375',
            '--adversaries', '2', '--seed', '3']
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    assert main(args + ['--out', str(first)]) == EXIT_OK
    assert main(args + ['--out', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text())['seed'] == 3


def test_wt_audit_csv(tmp_path):
    out = tmp_path / 'privacy.csv'
    assert main(['wt', 'audit', '--h', '3', '--set-size', '2', '--format', 'csv', '--out', str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == 'set,m0,m1,sd'
    assert len(lines) == 1 + 1 + 7 + 21


def test_config_file_with_flag_override(tmp_path, capsys):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'command': 'amd audit', 'k': 1, 'u': 1}))
    assert main(['amd', 'audit', '--config', str(path), '--u', '2']) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert (report['code_params']['k'], report['code_params']['u']) == (1, 2)


def test_bad_config_exits_2(tmp_path, capsys):
    path = tmp_path / 'run.json'
    path.write_text('{"k": }')
    assert main(['amd', 'audit', '--config', str(path)]) == EXIT_ERROR
    assert 'line 1 column' in capsys.readouterr().err


def test_infeasible_exact_run_exits_2(capsys):
    assert main(['amd', 'audit', '--k', '8', '--u', '8']) == EXIT_ERROR
    assert '--mode montecarlo' in capsys.readouterr().err


def test_lecss_verify(capsys):
    assert main(['lecss', 'verify', '--n', '12', '--ell', '5', '--r', '4', '--code-seed', '1']) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report['cross_check']['t_agrees']


@pytest.mark.parametrize('argv', [
    ['code', 'build', '--h', '4', '--extended', '--k', '1', '--u', '2'],
    ['code', 'build', '--construction', '1', '--n', '12', '--k', '1', '--u', '2', '--r', '4'],
])
def test_code_build(argv, capsys):
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert 'regime' in report and 'claimed_bound' in report


def test_nm_audit_default_read_rate(capsys):
    """Without --rho-r the adversaries read nothing."""
    assert main(['nm', 'audit', '--h', '4', '--extended', '--adversaries', '2']) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert len(report['per_adversary']) == 2
    assert all('skipped' not in r for r in report['per_adversary'])


def test_c1_montecarlo_audit_exit_code(capsys):
    argv = ['nm', 'audit', '--construction', '1', '--n', '12', '--k', '1', '--u', '2', '--r', '4',
            '--rho-r', '0.0834', '--mode', 'montecarlo', '--samples', '2000', '--adversaries', '2']
    assert main(argv) in (EXIT_OK, EXIT_VIOLATED)
    report = json.loads(capsys.readouterr().out)
    assert report['mode'] == 'montecarlo'
    assert report['samples'] == 2000


def test_smt_run_exact(capsys):
    argv = ['smt', 'run', '--q', '16', '--n', '5', '--t', '1', '--k', '2', '--adversaries', '2', '--mode', 'exact']
    assert main(argv) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report['secrecy']['mode'] == 'exact'
    assert len(report['nm']['per_adversary']) == 2
