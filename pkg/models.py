"""
nmcode Database Models

Models for storing audit runs and SMT session records.
"""

import json
from datetime import datetime

from sqlalchemy import BigInteger, Column, DateTime, Integer, String, Text

from extensions import Base


class AuditRun(Base):
    """
    One CLI run: the command, its mode and seed, the bound it was held to
    and the verdict.

    The full report is stored as the exact JSON text that was emitted.
    """
    __tablename__ = 'audit_runs'

    id = Column(String(36), primary_key=True)  # UUID
    command = Column(String(32), nullable=False, index=True)
    mode = Column(String(16))
    seed = Column(BigInteger)

    # Bound vs. measurement, as emitted (Fractions as 'p/q')
    claimed_bound = Column(String(64))
    max_sd = Column(String(64))
    verdict = Column(String(16), nullable=False, index=True)  # 'respected', 'violated'

    report_json = Column(Text, nullable=False)

    created_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    def __repr__(self):
        return f'<AuditRun {self.id} command={self.command} verdict={self.verdict}>'

    def to_dict(self):
        """Convert to dictionary for reports."""
        return {
            'id': self.id,
            'command': self.command,
            'mode': self.mode,
            'seed': self.seed,
            'claimed_bound': self.claimed_bound,
            'max_sd': self.max_sd,
            'verdict': self.verdict,
            'report': json.loads(self.report_json) if self.report_json else None,
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }


class SmtSession(Base):
    """
    A single NM-SMT transmission with its replay record.
    """
    __tablename__ = 'smt_sessions'

    id = Column(String(36), primary_key=True)
    run_id = Column(String(36), index=True)

    # Protocol parameters
    q = Column(Integer, nullable=False)
    n = Column(Integer, nullable=False)
    t = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False)

    message = Column(String(64), nullable=False)
    adversary_digest = Column(String(16), nullable=False, index=True)
    received = Column(String(64), nullable=False)

    # Replay record
    seed = Column(BigInteger, nullable=False)
    randomness_index = Column(BigInteger, nullable=False)

    created_at = Column(DateTime, default=datetime.utcnow, nullable=False, index=True)

    def __repr__(self):
        return f'<SmtSession {self.id} message={self.message} received={self.received}>'

    def to_dict(self):
        return {
            'id': self.id,
            'run_id': self.run_id,
            'q': self.q,
            'n': self.n,
            't': self.t,
            'k': self.k,
            'message': self.message,
            'adversary_digest': self.adversary_digest,
            'received': self.received,
            'seeds': {'seed': self.seed, 'randomness_index': self.randomness_index},
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }
