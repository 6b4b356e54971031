"""
Tests for the batched JSON-lines audit logger.
"""

import json
import logging

from nmcode.audit_logger import AuditLogger, get_audit_logger, init_audit_logger


def test_sink_receives_entries(tmp_path):
    sink = tmp_path / 'logs' / 'audit.jsonl'
    audit_log = AuditLogger('nm audit', str(sink), batch_size=2, flush_interval=0.1)
    audit_log.info('started', {'seed': 1})
    audit_log.warning('adversary 3 exceeds the claimed bound', {'sd': 0.5})
    audit_log.shutdown()

    entries = [json.loads(line) for line in sink.read_text().splitlines()]
    assert [e['level'] for e in entries] == ['INFO', 'WARNING']
    assert entries[0]['run'] == 'nm audit'
    assert entries[0]['context'] == {'seed': 1}


def test_no_sink_writes_nothing(tmp_path):
    audit_log = AuditLogger('bounds')
    audit_log.info('quiet')
    audit_log.shutdown()
    assert list(tmp_path.iterdir()) == []


def test_library_logs_are_bridged(tmp_path):
    sink = tmp_path / 'audit.jsonl'
    audit_log = init_audit_logger('amd audit', str(sink))
    assert get_audit_logger() is audit_log
    logging.getLogger('nmcode.amd').info('oracle finished')
    audit_log.shutdown()

    messages = [json.loads(line)['message'] for line in sink.read_text().splitlines()]
    assert 'oracle finished' in messages

    init_audit_logger('reset')
