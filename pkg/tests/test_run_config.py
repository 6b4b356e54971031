"""
Tests for run configuration loading and flag merging.
"""

import json

import pytest

from nmcode.errors import ConfigError
from nmcode.run_config import RunConfig, apply_flags, config_from_dict, load_config


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('  \n')
    assert load_config(str(path)) == RunConfig()


def test_file_values_are_merged(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({'command': 'nm audit', 'h': 4, 'extended': True, 'rho_r': 0.0625}))
    cfg = load_config(str(path))
    assert cfg.command == 'nm audit'
    assert (cfg.h, cfg.extended, cfg.rho_r) == (4, True, 0.0625)
    assert cfg.k == RunConfig().k


def test_unknown_key_is_named(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('{"adversary_count": 3}')
    with pytest.raises(ConfigError, match="unknown config key: 'adversary_count'"):
        load_config(str(path))


def test_syntax_error_has_line_and_column(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('{\n  "h": 4,\n  "k" 2\n}')
    with pytest.raises(ConfigError, match=r'line 3 column \d+'):
        load_config(str(path))


def test_missing_file():
    with pytest.raises(ConfigError, match='not found'):
        load_config('/nonexistent/run.json')


def test_flags_override_file():
    base = config_from_dict({'command': 'amd audit', 'k': 2, 'u': 2})
    cfg = apply_flags(base, {'k': 3, 'u': None, 'seed': 5})
    assert (cfg.k, cfg.u, cfg.seed) == (3, 2, 5)


@pytest.mark.parametrize('data, field', [
    ({'mode': 'fast'}, 'mode'),
    ({'rho_r': 1.5}, 'rho_r'),
    ({'k': 0}, 'k'),
    ({'command': 'nm run'}, 'command'),
])
def test_invalid_values(data, field):
    with pytest.raises(ConfigError, match=field):
        config_from_dict(data).validate()


def test_wrong_types():
    with pytest.raises(ConfigError, match='h: expected int'):
        config_from_dict({'h': 'four'})
    with pytest.raises(ConfigError, match='extended: expected bool'):
        config_from_dict({'extended': 1})
