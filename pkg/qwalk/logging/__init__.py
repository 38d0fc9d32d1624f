"""Run audit log and manifests."""

from .audit import AuditLogger, AuditEventType, get_audit_logger
from .manifest import MANIFEST_NAME, RunManifest, load_manifest, package_versions

__all__ = [
    'AuditLogger',
    'AuditEventType',
    'get_audit_logger',
    'MANIFEST_NAME',
    'RunManifest',
    'load_manifest',
    'package_versions',
]
