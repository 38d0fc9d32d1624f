"""Run manifests: everything needed to re-execute a CLI run."""

import json
import platform
import uuid
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import scipy
from pydantic import BaseModel, Field

MANIFEST_NAME = "manifest.json"


def package_versions() -> Dict[str, str]:
    """Versions of qwalk and the numeric stack."""
    from qwalk import __version__

    return {
        "qwalk": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


class RunManifest(BaseModel):
    """Command, parameters, seeds and outputs of one run."""
    run_id: str = Field(default_factory=lambda: str(uuid.uuid4()))
    command: str
    argv: List[str] = Field(default_factory=list)
    params: Dict[str, Any] = Field(default_factory=dict)
    seeds: Dict[str, int] = Field(default_factory=dict)
    versions: Dict[str, str] = Field(default_factory=package_versions)
    started_at: datetime = Field(default_factory=datetime.now)
    finished_at: Optional[datetime] = None
    exit_code: Optional[int] = None
    outputs: List[str] = Field(default_factory=list)

    def finish(self, exit_code: int) -> "RunManifest":
        self.finished_at = datetime.now()
        self.exit_code = exit_code
        return self

    def write(self, out_dir: Union[str, Path]) -> Path:
        """Write manifest.json into out_dir."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / MANIFEST_NAME
        path.write_text(self.model_dump_json(indent=2))
        return path


def load_manifest(path: Union[str, Path]) -> RunManifest:
    """Read a manifest file, or the manifest.json inside a directory."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    return RunManifest.model_validate(json.loads(path.read_text()))
