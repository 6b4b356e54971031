"""
AuditLogger - batched structured logging for nmcode runs

Entries are queued as {level, message, timestamp, context} records and a
background thread appends them in batches to a JSON-lines sink. Records
from the stdlib `nmcode` logger tree are bridged into the same queue.
"""

import json
import logging
import os
import queue
import threading
import time
import traceback
from datetime import datetime, timezone
from typing import Any, Dict, Optional


class AuditLogHandler(logging.Handler):
    """Logging handler that forwards records to an AuditLogger"""

    def __init__(self, audit_logger):
        super().__init__()
        self.audit_logger = audit_logger

    def emit(self, record):
        try:
            message = self.format(record)
            self.audit_logger.log(record.levelname, message, {'logger': record.name}, echo=False)
        except Exception:
            self.handleError(record)


class AuditLogger:
    """
    Structured logger that buffers entries and writes them in batches.

    Without a sink the entries only go to the stdlib `nmcode.audit` logger.
    """

    def __init__(self, run_name: str, sink_path: Optional[str] = None,
                 batch_size: int = 10, flush_interval: float = 2.0):
        """
        Initialize the audit logger.

        Args:
            run_name: Name stamped on every entry (usually the CLI command)
            sink_path: JSON-lines file to append to (None disables the sink)
            batch_size: Number of entries to batch before writing
            flush_interval: Seconds between automatic flushes
        """
        self.run_name = run_name
        self.sink_path = sink_path
        self.batch_size = batch_size
        self.flush_interval = flush_interval
        self.stdlib = logging.getLogger('nmcode.audit')

        self.log_queue = queue.Queue()
        self.stop_event = threading.Event()

        self.writer_thread = threading.Thread(target=self._write_loop, daemon=True)
        self.writer_thread.start()

    def _write_batch(self, entries: list):
        if not entries or not self.sink_path:
            return
        try:
            directory = os.path.dirname(self.sink_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(self.sink_path, 'a') as f:
                for entry in entries:
                    f.write(json.dumps(entry, sort_keys=True, default=str) + '\n')
        except OSError as e:
            self.stdlib.error(f"Failed to write audit log batch: {e}")

    def _write_loop(self):
        batch = []
        last_flush = time.time()

        while not self.stop_event.is_set() or not self.log_queue.empty():
            try:
                batch.append(self.log_queue.get(timeout=0.2))
            except queue.Empty:
                pass

            now = time.time()
            if len(batch) >= self.batch_size or (batch and now - last_flush >= self.flush_interval):
                self._write_batch(batch)
                batch = []
                last_flush = now

        if batch:
            self._write_batch(batch)

    def log(self, level: str, message: str, context: Dict[str, Any] = None, echo: bool = True):
        """
        Queue a structured entry.

        Args:
            level: DEBUG, INFO, WARNING, ERROR or CRITICAL
            message: Log message
            context: Optional dictionary with additional context
            echo: Also pass the message to the stdlib logger
        """
        entry = {
            "run": self.run_name,
            "level": level.upper(),
            "message": message,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "context": context or {},
        }
        self.log_queue.put(entry)
        if echo:
            self.stdlib.log(getattr(logging, level.upper(), logging.INFO), message)

    def debug(self, message: str, context: Dict[str, Any] = None):
        self.log("DEBUG", message, context)

    def info(self, message: str, context: Dict[str, Any] = None):
        self.log("INFO", message, context)

    def warning(self, message: str, context: Dict[str, Any] = None):
        self.log("WARNING", message, context)

    def error(self, message: str, context: Dict[str, Any] = None, exc_info: bool = False):
        if exc_info:
            message = f"{message}\n{traceback.format_exc()}"
        self.log("ERROR", message, context)

    def critical(self, message: str, context: Dict[str, Any] = None):
        self.log("CRITICAL", message, context)

    def shutdown(self):
        """Stop the writer thread and flush remaining entries"""
        self.stop_event.set()
        self.writer_thread.join(timeout=10)


_audit_logger: Optional[AuditLogger] = None


def init_audit_logger(run_name: str, sink_path: Optional[str] = None,
                      level: str = 'INFO', capture_library_logs: bool = True) -> AuditLogger:
    """
    Initialize the global audit logger

    Args:
        run_name: Name stamped on every entry
        sink_path: JSON-lines sink (None: stdlib logging only)
        level: Level for the `nmcode` stdlib logger tree
        capture_library_logs: If True, bridge `nmcode.*` stdlib records into the sink
    """
    global _audit_logger
    if _audit_logger is not None:
        _audit_logger.shutdown()
    _audit_logger = AuditLogger(run_name, sink_path)

    library_logger = logging.getLogger('nmcode')
    library_logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    for handler in list(library_logger.handlers):
        if isinstance(handler, AuditLogHandler):
            library_logger.removeHandler(handler)
    if capture_library_logs and sink_path:
        handler = AuditLogHandler(_audit_logger)
        handler.setLevel(logging.DEBUG)
        handler.addFilter(lambda record: record.name != 'nmcode.audit')
        library_logger.addHandler(handler)

    return _audit_logger


def get_audit_logger() -> AuditLogger:
    """Get the global audit logger, creating a sink-less one on first use"""
    global _audit_logger
    if _audit_logger is None:
        _audit_logger = AuditLogger('nmcode')
    return _audit_logger
