"""Cross-oracle verification suite."""

from .reports import CheckResult, SuiteReport
from .suite import CHECKS, verify_suite

__all__ = [
    'CHECKS',
    'CheckResult',
    'SuiteReport',
    'verify_suite',
]
