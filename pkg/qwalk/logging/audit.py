"""Audit logging for qwalk runs.

Every CLI run and verification check leaves one JSON object per line in
<LOG_DIR>/audit_YYYY-MM-DD.jsonl, so a result can be traced back to the
command, parameters and seeds that produced it.
"""

import logging
import json
from datetime import datetime
from typing import Optional, Dict, Any, List, Union
from pathlib import Path
from enum import Enum

from qwalk.config import get_config


class AuditEventType(Enum):
    """Types of audit events."""
    RUN_STARTED = "run_started"
    RUN_FINISHED = "run_finished"
    CHECK_PASSED = "check_passed"
    CHECK_FAILED = "check_failed"
    CAP_EXCEEDED = "cap_exceeded"
    ARTIFACT_WRITTEN = "artifact_written"


class AuditLogger:
    """JSONL audit trail of runs, checks and artifacts."""

    def __init__(self, log_dir: Optional[Union[str, Path]] = None):
        """Initialize audit logger.

        Args:
            log_dir: Directory for audit logs. If None, uses LOG_DIR from config.
        """
        log_dir = Path(get_config().LOG_DIR if log_dir is None else log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        self.log_dir = log_dir

        # one file per day
        today = datetime.now().strftime("%Y-%m-%d")
        self.log_file = log_dir / f"audit_{today}.jsonl"

        # one logger per file, so repeated instances do not stack handlers
        self.logger = logging.getLogger(f"qwalk.audit.{self.log_file.resolve()}")
        self.logger.setLevel(logging.INFO)
        self.logger.propagate = False
        if not self.logger.handlers:
            handler = logging.FileHandler(self.log_file)
            handler.setLevel(logging.INFO)
            self.logger.addHandler(handler)

    def log_event(
        self,
        event_type: AuditEventType,
        run_id: str,
        action: str,
        details: Optional[Dict[str, Any]] = None,
        success: bool = True,
        error: Optional[str] = None,
    ):
        """Log an audit event.

        Args:
            event_type: Type of event
            run_id: Run the event belongs to
            action: Short description of the action
            details: Additional event details (JSON-serializable)
            success: Whether the action succeeded
            error: Error message if the action failed
        """
        event = {
            "timestamp": datetime.now().isoformat(),
            "event_type": event_type.value,
            "run_id": run_id,
            "action": action,
            "success": success,
            "details": details or {},
        }

        if error:
            event["error"] = error

        self.logger.info(json.dumps(event, default=str))
        for handler in self.logger.handlers:
            handler.flush()

    def log_run(self, run_id: str, command: str, params: Dict[str, Any], finished: bool = False,
                exit_code: Optional[int] = None):
        """Log the start or the end of a CLI run."""
        self.log_event(
            event_type=AuditEventType.RUN_FINISHED if finished else AuditEventType.RUN_STARTED,
            run_id=run_id,
            action=f"{command}_{'finished' if finished else 'started'}",
            details={"params": params, "exit_code": exit_code} if finished else {"params": params},
            success=exit_code in (None, 0),
        )

    def log_check(self, run_id: str, check_id: str, passed: bool, detail: Optional[Dict[str, Any]] = None):
        """Log one verification check."""
        self.log_event(
            event_type=AuditEventType.CHECK_PASSED if passed else AuditEventType.CHECK_FAILED,
            run_id=run_id,
            action=f"check_{check_id}",
            details=detail,
            success=passed,
        )

    def log_cap_exceeded(self, run_id: str, what: str, requested: int, cap: int):
        """Log a computation refused by a resource cap."""
        self.log_event(
            event_type=AuditEventType.CAP_EXCEEDED,
            run_id=run_id,
            action="cap_exceeded",
            details={"what": what, "requested": requested, "cap": cap},
            success=False,
            error=f"{what}: {requested} > {cap}",
        )

    def log_artifact(self, run_id: str, path: Union[str, Path], kind: str):
        """Log a written output file."""
        self.log_event(
            event_type=AuditEventType.ARTIFACT_WRITTEN,
            run_id=run_id,
            action=f"wrote_{kind}",
            details={"path": str(path)},
        )

    def read_events(self, event_type: Optional[AuditEventType] = None,
                    run_id: Optional[str] = None) -> List[Dict[str, Any]]:
        """Read today's events back, optionally filtered."""
        if not self.log_file.exists():
            return []
        events = []
        with open(self.log_file, "r") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event_type is not None and event["event_type"] != event_type.value:
                    continue
                if run_id is not None and event["run_id"] != run_id:
                    continue
                events.append(event)
        return events


# Global audit logger instance
_audit_logger: Optional[AuditLogger] = None


def get_audit_logger() -> AuditLogger:
    """Get the global audit logger instance."""
    global _audit_logger
    if _audit_logger is None:
        _audit_logger = AuditLogger()
    return _audit_logger
