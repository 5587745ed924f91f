"""Curve CSV / labels CSV / result JSON reading and writing.

Curve CSV: header row `id,t_1,...,t_n` with the shared grid values; one row per
curve.  Labels CSV: `id,label`.  All ids are kept as strings in files; the
pipeline works on dense integer indexes in file order.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Dict, List, Tuple

import numpy as np

from .errors import InvalidInputError


def write_curves_csv(path, ids, points, samples):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [repr(float(t)) for t in points])
        for curve_id, row in zip(ids, samples):
            writer.writerow([str(curve_id)] + [repr(float(v)) for v in row])


def read_curves_csv(path) -> Tuple[List[str], np.ndarray, np.ndarray]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputError(f"cannot read curves file: {exc}") from exc
    if not rows or len(rows) < 2:
        raise InvalidInputError("curves file needs a header and at least one curve")
    header = rows[0]
    if not header or header[0] != "id":
        raise InvalidInputError("curves file header must start with 'id'")
    try:
        points = np.array([float(v) for v in header[1:]])
    except ValueError as exc:
        raise InvalidInputError(f"bad grid value in header: {exc}") from exc
    names: List[str] = []
    data = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(points) + 1:
            raise InvalidInputError(f"row {line_no} has {len(row) - 1} values, expected {len(points)}")
        names.append(row[0])
        try:
            data.append([float(v) for v in row[1:]])
        except ValueError as exc:
            raise InvalidInputError(f"bad value in row {line_no}: {exc}") from exc
    if len(set(names)) != len(names):
        raise InvalidInputError("duplicate curve ids in curves file")
    return names, points, np.array(data)


def write_labels_csv(path, ids, labels: Dict):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label"])
        for curve_id in ids:
            writer.writerow([str(curve_id), str(labels[curve_id])])


def read_labels_csv(path) -> Dict[str, str]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InvalidInputError(f"cannot read labels file: {exc}") from exc
    if not rows or rows[0][:2] != ["id", "label"]:
        raise InvalidInputError("labels file header must be 'id,label'")
    labels = {}
    for row in rows[1:]:
        if not row:
            continue
        if len(row) < 2:
            raise InvalidInputError("labels rows need an id and a label")
        labels[row[0]] = row[1]
    return labels


def _json_value(value) -> object:
    if value is None:
        return None
    return value if math.isfinite(value) else None


def result_json(result, names: List[str]) -> str:
    """Deterministic JSON for a run result; ids mapped back to file names."""
    partition = [
        [names[i] for i in sorted(group)]
        for group in sorted(result.partition.groups, key=min)
    ]
    candidates = [
        {
            "partition": [
                [names[i] for i in sorted(group)]
                for group in sorted(record.partition.groups, key=min)
            ],
            "nu0": _json_value(record.score),
            "threshold": record.threshold,
            "iteration": record.iteration,
        }
        for record in result.candidates
    ]
    data = {
        "partition": partition,
        "threshold": result.threshold,
        "index_name": result.index_name,
        "index_value": _json_value(result.index_value),
        "iterations": result.iterations,
        "candidates": candidates,
    }
    if result.warps is not None:
        data["warps"] = {names[i]: samples for i, samples in sorted(result.warps.items())}
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def read_partition_json(path) -> List[List[str]]:
    """Accepts a result JSON (with a 'partition' field) or a bare array."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read partition file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"bad JSON in partition file: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("partition")
    if not isinstance(data, list) or not all(isinstance(g, list) for g in data):
        raise InvalidInputError("partition must be an array of arrays of ids")
    return [[str(v) for v in group] for group in data]
