"""Verification check plan."""

from .loader import LEVELS, check_params, format_checks, load_verify_checks, load_yaml_config

__all__ = [
    'LEVELS',
    'check_params',
    'format_checks',
    'load_verify_checks',
    'load_yaml_config',
]
