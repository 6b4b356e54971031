"""
Report emission and optional run persistence.

Reports are written with a fixed field order so identical inputs give
byte-identical files. Persistence is opt-in via NMCODE_DATABASE_URL and
never touches the emitted bytes.
"""

import csv
import io
import json
import logging
import os
import sys
import uuid
from fractions import Fraction
from typing import Any, Dict, Optional

import numpy as np

from . import config
from .errors import ConfigError, NmCodeError

logger = logging.getLogger(__name__)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return round(float(value), 10)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    raise TypeError(f"cannot serialise {type(value).__name__}")


def report_dict(report: Any) -> Dict:
    return report.to_dict() if hasattr(report, 'to_dict') else report


def render_json(report: Any) -> str:
    return json.dumps(report_dict(report), indent=2, ensure_ascii=False, default=_jsonable) + '\n'


def render_csv(report: Any) -> str:
    """Reports with a tabular form provide `to_csv`; flat dicts become key,value rows."""
    if hasattr(report, 'to_csv'):
        return report.to_csv()
    data = report_dict(report)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(['key', 'value'])
    for key, value in data.items():
        writer.writerow([key, value if isinstance(value, (str, int, float)) else json.dumps(value, default=_jsonable)])
    return out.getvalue()


def emit_report(report: Any, fmt: str = 'json', path: Optional[str] = None) -> str:
    """
    Write a report as JSON or CSV to `path` (stdout when None).

    Returns:
        The emitted text

    Raises:
        ConfigError: unknown format
        OSError: the file cannot be written
    """
    if fmt == 'json':
        text = render_json(report)
    elif fmt == 'csv':
        text = render_csv(report)
    else:
        raise ConfigError(f"format: expected json or csv, got {fmt!r}")

    if path is None:
        sys.stdout.write(text)
        return text
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.debug(f"report written to {path} ({len(text)} bytes)")
    return text


# --- persistence ---

def _database(url: Optional[str]):
    url = url or config['DATABASE_URL']
    if not url:
        return None
    from extensions import db
    db.init_engine(url)
    db.create_all()
    return db


def record_run(command: str, run_config, report: Any, verdict: str,
               url: Optional[str] = None) -> Optional[str]:
    """Store an AuditRun row; returns its id, or None when persistence is off."""
    database = _database(url)
    if database is None:
        return None
    from models import AuditRun

    data = report_dict(report)
    run = AuditRun(
        id=str(uuid.uuid4()),
        command=command,
        mode=getattr(run_config, 'mode', None),
        seed=getattr(run_config, 'seed', None),
        claimed_bound=str(data.get('claimed_bound', '')) if isinstance(data, dict) else '',
        max_sd=str(data.get('max_sd', '')) if isinstance(data, dict) else '',
        verdict=verdict,
        report_json=render_json(report),
    )
    try:
        with database.session() as session:
            session.add(run)
            session.commit()
    except Exception as e:
        raise NmCodeError(f"could not record run: {e}")
    logger.info(f"recorded run {run.id} ({command}, {verdict})")
    return run.id


def record_session(log, run_id: Optional[str] = None, url: Optional[str] = None) -> Optional[str]:
    """Store an SmtSession row for a SessionLog."""
    database = _database(url)
    if database is None:
        return None
    from models import SmtSession

    row = SmtSession(
        id=str(uuid.uuid4()),
        run_id=run_id,
        q=log.protocol.get('q', 2),
        n=log.protocol['n'],
        t=log.protocol.get('t', 0),
        k=log.protocol['k'],
        message=log.message,
        adversary_digest=log.adversary['digest'],
        received=log.received,
        seed=log.seeds['seed'],
        randomness_index=log.seeds['randomness_index'],
    )
    try:
        with database.session() as session:
            session.add(row)
            session.commit()
    except Exception as e:
        raise NmCodeError(f"could not record session: {e}")
    return row.id
