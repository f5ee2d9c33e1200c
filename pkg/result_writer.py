"""
Serialization of solver results to JSON and CSV
"""

import csv
import io
import json
import math
import os
import sys
import threading
from typing import Any, Dict, Optional

from existence_scanner import BetaLimitCurve, RegionScan
from logger_config import get_logger

logger = get_logger(__name__)


def format_number(value: float) -> str:
    """Shortest round-trip text of a float; inf and nan as 'inf' / '-inf' / 'nan'"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def to_jsonable(obj: Any) -> Any:
    """Convert numpy values, enums and non-finite floats into plain JSON values"""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if hasattr(obj, "tolist"):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else format_number(obj)
    if hasattr(obj, "value"):
        return to_jsonable(obj.value)
    return float(obj) if hasattr(obj, "__float__") else str(obj)


def _csv_text(header, rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def region_csv(scan: RegionScan) -> str:
    """`alpha,beta,exists` rows, beta-major then alpha"""
    rows = []
    for i, beta in enumerate(scan.beta_grid):
        beta_text = format_number(beta)
        for j, alpha in enumerate(scan.alpha_grid):
            rows.append((format_number(alpha), beta_text, int(bool(scan.exists[i, j]))))
    return _csv_text(("alpha", "beta", "exists"), rows)


def beta_limit_csv(curve: BetaLimitCurve) -> str:
    """`n,beta_limit` rows, `inf` for an unbounded limit"""
    rows = [(int(n), format_number(limit)) for n, limit in zip(curve.n_values, curve.beta_limit)]
    return _csv_text(("n", "beta_limit"), rows)


def _cell(value: Any) -> str:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return str(value)
    return format_number(value)


def dict_csv(rows: Dict[str, Any]) -> str:
    """Two-column `key,value` CSV of a flat mapping, keys sorted"""
    return _csv_text(("key", "value"), [(key, _cell(rows[key])) for key in sorted(rows)])


class ResultWriter:
    """Writes payloads to a file or to stdout; one write at a time"""

    def __init__(self, output_path: Optional[str] = None):
        """
        Initialize result writer

        Args:
            output_path: File to write; stdout when None
        """
        self.output_path = output_path
        self.lock = threading.Lock()

        directory = os.path.dirname(output_path) if output_path else ""
        if directory:
            os.makedirs(directory, exist_ok=True)

    def write_text(self, text: str):
        with self.lock:
            if self.output_path is None:
                sys.stdout.write(text)
                sys.stdout.flush()
                return
            try:
                with open(self.output_path, "w", encoding="utf-8") as f:
                    f.write(text)
            except OSError as e:
                logger.error(f"Error writing results to {self.output_path}: {e}", exc_info=True)
                raise
            logger.info(f"Results written to {self.output_path}")

    def write_json(self, payload: Dict):
        """Deterministic JSON: sorted keys, two-space indent, trailing newline"""
        self.write_text(json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n")

    def write_csv(self, text: str):
        self.write_text(text)
