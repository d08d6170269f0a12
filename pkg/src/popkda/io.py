"""Output conventions: CSV files with a ``#``-prefixed JSON header, model JSON."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .population import DiscriminantModel, GridSpec
from .rff import RffModel
from .sample import SampleKdaModel

MODEL_TYPES = {
    "polynomial": DiscriminantModel,
    "sample": SampleKdaModel,
    "rff": RffModel,
}


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_jsonable, sort_keys=True)


def header_line(meta: dict) -> str:
    return "# " + dumps(meta) + "\n"


def write_csv(path, columns: list[str], rows, meta: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(header_line(meta))
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def read_csv(path) -> tuple[dict, list[str], list[list[str]]]:
    """Metadata header (or ``{}``), column names and raw string rows."""
    meta, columns, rows = {}, None, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                meta = json.loads(line[1:])
                continue
            break
        else:
            return meta, [], []
        reader = csv.reader([line] + fh.readlines())
        for row in reader:
            if columns is None:
                columns = row
            elif row:
                rows.append(row)
    return meta, columns or [], rows


def write_json(path, obj: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, default=_jsonable, sort_keys=True, indent=2) + "\n")
    return path


def model_from_dict(data: dict):
    kind = data.get("type")
    if kind not in MODEL_TYPES:
        raise ValueError(f"unknown model type {kind!r}")
    return MODEL_TYPES[kind].from_dict(data)


def load_model(path):
    data = json.loads(Path(path).read_text())
    return model_from_dict(data.get("model", data))


def grid_rows(model, grid: GridSpec):
    pts = grid.points()
    if model.dim != 2:
        raise ValueError(f"grids are two-dimensional; model has dimension {model.dim}")
    scores = model.score(pts)
    return [(x, y, s) for (x, y), s in zip(pts, scores)]
