"""
Shared pytest setup: the repo root on sys.path (for extensions/models),
no database unless a test asks for one, and small fixed instances.
"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

os.environ.pop('NMCODE_DATABASE_URL', None)
os.environ.setdefault('NMCODE_INSTANCE_PATH', os.path.join(ROOT, 'tests', 'no-instance'))

from nmcode import config  # noqa: E402


@pytest.fixture(autouse=True)
def no_persistence(monkeypatch):
    """Runs are only recorded when a test passes an explicit URL."""
    monkeypatch.setitem(config, 'DATABASE_URL', None)


@pytest.fixture(scope='session')
def ext_hamming_c2():
    """Construction 2 over the [16,11] extended Hamming coset code, k=1, u=2."""
    from nmcode.nmc import hamming_construction2
    return hamming_construction2(4, k=1, u=2, seed=0, extended=True)


@pytest.fixture(scope='session')
def smt_protocol():
    """GF(16), 5 wires, 1 corruptible: RS[5,3] coset code with a 2-bit message."""
    from nmcode.field_linalg import get_field
    from nmcode.smtsim import smt_build
    return smt_build(get_field(4), 5, 1, 2, seed=0)
