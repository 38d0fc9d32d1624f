"""Loader for the verification check plan."""

import yaml
from pathlib import Path
from typing import Dict, List, Any, Optional

LEVELS = ("quick", "full")


def load_yaml_config(filename: str) -> Dict[str, Any]:
    """Load a YAML configuration file.

    Args:
        filename: Name of the YAML file (without path)

    Returns:
        Dictionary containing the configuration
    """
    config_dir = Path(__file__).parent
    config_path = config_dir / filename

    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, 'r') as f:
        return yaml.safe_load(f)


def load_verify_checks() -> List[Dict[str, Any]]:
    """Load the verification check plan.

    Returns:
        List of check entries with id, category, description and levels
    """
    return load_yaml_config('verify_checks.yaml')['verify_checks']


def check_params(check_id: str, level: str, checks: Optional[List[Dict[str, Any]]] = None) -> Dict[str, Any]:
    """Parameters of one check at one level.

    Raises:
        KeyError: If the check id is unknown
        ValueError: If the level is unknown
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    for check in checks if checks is not None else load_verify_checks():
        if check['id'] == check_id:
            return dict(check['levels'][level])
    raise KeyError(f"unknown check id: {check_id}")


def format_checks(checks: List[Dict[str, Any]]) -> str:
    """Human-readable listing of the plan, one line per check."""
    return "\n".join(f"{c['id']:<14} {c['category']:<18} {c['description']}" for c in checks)
