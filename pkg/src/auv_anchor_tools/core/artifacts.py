"""Deterministic CSV and JSON artifact files.

Every artifact is UTF-8 with LF line endings and ``.`` decimals, so two
runs with the same inputs produce byte-identical files.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import pandas as pd

from .logging import get_logger

logger = get_logger("artifacts")


def _clean(value: Any) -> Any:
    """Replace non-finite floats with None so JSON stays standard."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


class ArtifactWriter:
    """Writes named artifacts below one output directory."""

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def write_csv(
        self,
        name: str,
        rows: Union[pd.DataFrame, Iterable[Dict[str, Any]]],
        columns: Sequence[str],
    ) -> Path:
        """Write rows with a fixed column order."""
        frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=list(columns))
        path = self._path(name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            frame.to_csv(fh, columns=list(columns), index=False, lineterminator="\n", na_rep="")
        logger.debug("Wrote %d rows to %s", len(frame), path)
        return path

    def write_json(self, name: str, data: Dict[str, Any]) -> Path:
        path = self._path(name)
        text = json.dumps(_clean(data), indent=2, sort_keys=True, ensure_ascii=False)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
        logger.debug("Wrote %s", path)
        return path

    def written(self) -> List[Path]:
        if not self.out_dir.exists():
            return []
        return sorted(p for p in self.out_dir.iterdir() if p.is_file())
