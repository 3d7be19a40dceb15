"""Dataset ingestion and machine-readable result output.

CSV is strict: rectangular, numeric, finite, with a header row; parse errors
name the offending cell. All output files are written atomically (temp file
in the target directory, then rename), so an interrupted run leaves nothing
partial behind.
"""

import csv
import dataclasses
import hashlib
import json
import os
import tempfile
from datetime import datetime, timezone

import numpy as np

from .data import Dataset
from .errors import ConfigError

TOOL_VERSION = "0.1.0"


def load_csv(path, response_column) -> Dataset:
    """Read a numeric CSV with a header into a Dataset.

    The named column becomes the response; the remaining columns become
    predictors in header order; row ids are 1..n.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ConfigError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if response_column not in header:
            raise ConfigError(
                f"{path}: response column {response_column!r} not in header {header}"
            )
        y_col = header.index(response_column)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ConfigError(
                    f"{path}:{lineno}: expected {len(header)} fields, found {len(row)}"
                )
            vals = []
            for colno, cell in enumerate(row):
                try:
                    v = float(cell)
                except ValueError:
                    raise ConfigError(
                        f"{path}:{lineno}: column {header[colno]!r}: "
                        f"not a number: {cell!r}"
                    ) from None
                if not np.isfinite(v):
                    raise ConfigError(
                        f"{path}:{lineno}: column {header[colno]!r}: "
                        f"non-finite value {cell!r}"
                    )
                vals.append(v)
            rows.append(vals)
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=np.float64)
    y = arr[:, y_col]
    x = np.delete(arr, y_col, axis=1)
    if x.shape[1] == 0:
        raise ConfigError(f"{path}: need at least one predictor column")
    return Dataset.from_arrays(y, x)


def write_csv(path, data: Dataset, response_column="y"):
    """Inverse of load_csv; floats use shortest round-trip formatting."""
    header = [response_column] + [f"x{j}" for j in range(1, data.p + 1)]
    lines = [",".join(header)]
    for i in range(data.n):
        vals = [repr(float(data.y[i]))] + [repr(float(v)) for v in data.x[i]]
        lines.append(",".join(vals))
    atomic_write_text(path, "\n".join(lines) + "\n")


def atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in obj]
    return obj


def write_json(path, payload):
    atomic_write_text(path, json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def config_digest(payload):
    """Deterministic digest of a canonicalized configuration object."""
    blob = json.dumps(_jsonable(payload), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def utc_now():
    return datetime.now(timezone.utc).isoformat()


def make_manifest(config_payload, seed, started, finished, wall_times):
    return {
        "tool": "infldiag",
        "version": TOOL_VERSION,
        "config_digest": config_digest(config_payload),
        "seed": int(seed),
        "started": started,
        "finished": finished,
        "wall_times_seconds": wall_times,
    }


def write_scores_csv(path, result):
    """Per-point table: row_id, raw, standardized, p_value, decision."""
    lines = ["row_id,raw,standardized,p_value,decision"]
    for pp in result.per_point:
        def fmt(v):
            return "" if v is None or (isinstance(v, float) and not np.isfinite(v)) else repr(float(v))

        lines.append(
            f"{pp.row_id},{fmt(pp.raw)},{fmt(pp.standardized)},{fmt(pp.p_value)},{pp.decision}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def result_payload(result):
    payload = {
        "procedure": result.procedure_id,
        "selector": result.selector_id,
        "alpha": result.alpha,
        "alpha0": result.alpha0,
        "influential_row_ids": list(result.influential),
        "n_influential": len(result.influential),
        "wall_time_seconds": result.wall_time,
        "fit_count": result.fit_count,
        "warnings": list(result.warnings),
        "per_point": [
            {
                "row_id": pp.row_id,
                "raw": pp.raw,
                "standardized": pp.standardized,
                "p_value": pp.p_value,
                "decision": pp.decision,
                "tested": pp.tested,
            }
            for pp in result.per_point
        ],
    }
    if result.partition is not None:
        payload["partition"] = {
            "method": result.partition.method_id,
            "suspect_positions": list(result.partition.suspect),
            "clean_positions": list(result.partition.clean),
            "inertia": result.partition.inertia,
        }
    return payload
