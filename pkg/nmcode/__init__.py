"""
nmcode - non-malleable codes for leaky bitwise tampering.

Library + CLI that builds AMD codes, coset wiretap II codes, LECSS and the
two modular NM-code constructions, samples tampering adversaries, and
audits every security bound by exact enumeration or Monte Carlo.

Process settings are read from the environment (optionally from a
.nmcodeenv file) into `config`.
"""

import configparser
import os

from dotenv import load_dotenv

load_dotenv(os.environ.get('NMCODE_ENV_FILE', '.nmcodeenv'))


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


def _database_url():
    """NMCODE_DATABASE_URL, else the connection string init_db.py saved under instance/."""
    url = os.environ.get('NMCODE_DATABASE_URL')
    if url:
        return url
    parser = configparser.RawConfigParser()
    parser.read(os.path.join(os.environ.get('NMCODE_INSTANCE_PATH', 'instance'), 'nmcode.conf'))
    return parser.get('database', 'connection_string', fallback=None)


config = {
    'THREADS': max(1, _int_env('NMCODE_THREADS', os.cpu_count() or 1)),
    'LOG_LEVEL': os.environ.get('NMCODE_LOG_LEVEL', 'INFO').upper(),
    'LOG_FILE': os.environ.get('NMCODE_LOG_FILE') or None,
    'DATABASE_URL': _database_url(),
    'MAX_ENUMERATION': _int_env('NMCODE_MAX_ENUMERATION', 1 << 28),
}

__version__ = '0.3.0'
