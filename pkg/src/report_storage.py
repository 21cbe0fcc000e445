"""
Report Storage Module
Atomic JSON/CSV persistence of reports and the run manifests written next to them
"""

import os
import json
import logging
import tempfile
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from lab_config import get_settings

logger = logging.getLogger(__name__)

# Significant digits of numeric CSV fields
CSV_FLOAT_FORMAT = "%.12g"


class RunManifest(BaseModel):
    """What was run, with which seed, and where the results went"""

    model_config = ConfigDict(frozen=True)

    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    outputs: List[str] = Field(default_factory=list)
    timestamp: str = Field(default_factory=lambda: datetime.now().isoformat())

    @classmethod
    def load(cls, path: str) -> "RunManifest":
        with open(path, "r") as f:
            return cls.model_validate(json.load(f))


def manifest_path(output_path: str) -> str:
    return f"{output_path}.manifest.json"


class ReportStore:
    """Writes report files atomically (temp file in the target directory + os.replace)"""

    def __init__(self, output_dir: Optional[str] = None):
        """
        Initialize storage

        Args:
            output_dir: Base directory for relative paths (defaults to LAB_OUTPUT_DIR)
        """
        self.output_dir = output_dir or get_settings().output_dir

    def resolve(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.output_dir, path)

    def _write_atomic(self, path: str, text: str) -> str:
        target = self.resolve(path)
        directory = os.path.dirname(target) or "."
        os.makedirs(directory, exist_ok=True)

        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(target))
        try:
            with os.fdopen(fd, "w", newline="") as f:
                f.write(text)
            os.replace(tmp_path, target)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise
        logger.info("wrote %s", target)
        return target

    def write_json(self, path: str, data: Any) -> str:
        """Write data as JSON at full double precision; returns the resolved path"""
        return self._write_atomic(path, json.dumps(data, indent=2) + "\n")

    def write_csv(self, path: str, rows: Union[pd.DataFrame, Sequence[Dict[str, Any]]]) -> str:
        """Write rows as CSV with 12 significant digits; returns the resolved path"""
        frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
        return self._write_atomic(path, frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT))

    def write(self, path: str, data: Any, fmt: str = "json") -> str:
        """
        Write a report in the requested format

        CSV needs tabular data: a DataFrame, a list of flat dicts, or a dict
        holding such a list under "rows".
        """
        if fmt == "json":
            return self.write_json(path, data)
        if fmt == "csv":
            rows = data["rows"] if isinstance(data, dict) else data
            return self.write_csv(path, rows)
        raise ValueError(f"unknown report format {fmt!r}")

    def write_manifest(self, output_path: str, manifest: RunManifest) -> str:
        """Write <output>.manifest.json next to a report"""
        return self.write_json(manifest_path(output_path), manifest.model_dump())
