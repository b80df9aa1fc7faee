"""On-disk result store: one directory of CSV artifacts plus a JSON manifest."""

import json
import logging
import threading
from pathlib import Path
from typing import Any

import pandas as pd

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class ResultStore:
    """Writes experiment artifacts below one output directory."""

    def __init__(self, out_dir: str | Path = "results"):
        """Initialize the result store.

        Args:
            out_dir: Directory that receives every artifact of a run
        """
        self.out_dir = Path(out_dir)
        self._ensure_directory_exists()
        self._lock = threading.Lock()
        self.files: list[str] = []

    def _ensure_directory_exists(self) -> None:
        """Create the output directory if it doesn't exist."""
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def path_for(self, name: str) -> Path:
        return self.out_dir / name

    def _record(self, path: Path) -> None:
        name = path.name
        if name not in self.files:
            self.files.append(name)

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        """Write one CSV artifact; ``name`` is the file name without extension."""
        path = self.path_for(f"{name}.csv")
        with self._lock:
            frame.to_csv(path, index=False)
            self._record(path)
        logger.info(f"💾 Wrote {path} ({len(frame)} rows)")
        return path

    def read_frame(self, name: str) -> pd.DataFrame:
        path = self.path_for(f"{name}.csv")
        if not path.exists():
            raise FileNotFoundError(f"no artifact {path}")
        return pd.read_csv(path)

    def write_manifest(self, manifest: dict[str, Any]) -> Path:
        path = self.path_for(MANIFEST_NAME)
        with self._lock:
            path.write_text(json.dumps(manifest, indent=2, default=str) + "\n", encoding="utf-8")
            self._record(path)
        logger.info(f"💾 Wrote manifest {path}")
        return path

    @staticmethod
    def load_manifest(path: str | Path) -> dict[str, Any]:
        """Read a manifest file (or the manifest inside a result directory)."""
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ValueError(f"cannot read manifest {path}: {e}") from e
