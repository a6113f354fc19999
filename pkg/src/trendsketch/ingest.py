"""CSV/JSON corpus loading: rows grouped into per-signal time series.

Rows are grouped by their categorical values; within each group rows
are sorted by time, duplicate timestamps keep the last row (with a
warning), and groups with fewer than 2 points are dropped (with a
warning). Malformed timestamps fail the whole ingest: silent row
skipping would corrupt the global extents.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .constraints import format_timestamp, parse_timestamp
from .errors import IngestError, ValidationError
from .model import Dataset, Extents, Schema, Signal, compute_global_extents

ID_SEPARATOR = "/"


@dataclass(frozen=True)
class ColumnMapping:
    time_field: str
    categorical_fields: tuple[str, ...]
    measure_fields: tuple[str, ...]
    id_field: str | None = None      # explicit id column, else dims joined by "/"
    time_format: str = "auto"        # "auto" | "iso" | "year"


@dataclass
class IngestResult:
    dataset: Dataset
    warnings: list[str] = field(default_factory=list)


def _parse_time(raw: str, fmt: str, row_index: int) -> float:
    raw = raw.strip()
    try:
        if fmt == "year":
            return parse_timestamp(str(int(raw)))
        if fmt == "iso":
            if raw.lstrip("-").isdigit():
                raise ValidationError("bare year not allowed with time_format='iso'")
            return parse_timestamp(raw)
        return parse_timestamp(raw)  # auto: bare year or ISO-8601
    except (ValidationError, ValueError) as exc:
        raise IngestError(f"row {row_index}: unparseable timestamp {raw!r}: {exc}") from exc


def load_csv(data: bytes | str, mapping: ColumnMapping) -> IngestResult:
    """Parse an RFC-4180 CSV (UTF-8, header row required) into a Dataset."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise IngestError("empty CSV: no header row")
    header = set(reader.fieldnames)
    needed = [mapping.time_field, *mapping.categorical_fields, *mapping.measure_fields]
    if mapping.id_field:
        needed.append(mapping.id_field)
    missing = [c for c in needed if c not in header]
    if missing:
        raise IngestError(f"missing columns: {', '.join(missing)}")

    groups: dict[tuple[str, ...], dict] = {}
    for row_index, row in enumerate(reader, start=1):
        dims = tuple(str(row[c]) for c in mapping.categorical_fields)
        t = _parse_time(row[mapping.time_field], mapping.time_format, row_index)
        try:
            y = [float(row[c]) for c in mapping.measure_fields]
        except (TypeError, ValueError):
            raise IngestError(f"row {row_index}: non-numeric measure value")
        g = groups.setdefault(dims, {"rows": [], "id": None})
        if mapping.id_field:
            g["id"] = str(row[mapping.id_field])
        g["rows"].append((t, y))

    warnings: list[str] = []
    signals: list[Signal] = []
    schema = Schema(
        time_field=mapping.time_field,
        categorical_fields=tuple(mapping.categorical_fields),
        measure_fields=tuple(mapping.measure_fields),
    )
    for dims in sorted(groups):
        g = groups[dims]
        sid = g["id"] or ID_SEPARATOR.join(dims)
        rows = sorted(g["rows"], key=lambda r: r[0])
        # duplicate timestamps: keep the last occurrence
        deduped: dict[float, list[float]] = {}
        for t, y in rows:
            if t in deduped:
                warnings.append(f"signal {sid!r}: duplicate timestamp {t}, keeping last")
            deduped[t] = y
        if len(deduped) < 2:
            warnings.append(f"signal {sid!r}: fewer than 2 points, dropped")
            continue
        ts = np.array(sorted(deduped))
        ys = np.array([deduped[t] for t in ts])
        signals.append(
            Signal(id=sid, dims=dict(zip(mapping.categorical_fields, dims)), t=ts, y=ys)
        )
    if not signals:
        raise IngestError("no signals with at least 2 points after ingestion")

    dataset = Dataset(
        id=_dataset_id(signals),
        schema=schema,
        signals=tuple(signals),
        global_extents=compute_global_extents(signals),
    )
    return IngestResult(dataset=dataset, warnings=warnings)


def _dataset_id(signals: list[Signal]) -> str:
    import hashlib

    h = hashlib.sha256()
    for s in signals:
        h.update(s.id.encode())
        h.update(s.t.tobytes())
        h.update(s.y.tobytes())
    return h.hexdigest()[:12]


def dataset_summary(dataset: Dataset) -> dict:
    """Signal count, global extents, and per-dimension cardinalities."""
    cards = {
        f: len({s.dims.get(f) for s in dataset.signals})
        for f in dataset.schema.categorical_fields
    }
    ext = dataset.global_extents
    return {
        "signal_count": len(dataset.signals),
        "extents": {
            "time": list(ext.time),
            "measures": {
                name: list(bounds)
                for name, bounds in zip(dataset.schema.measure_fields, ext.measures)
            },
        },
        "dim_cardinalities": cards,
    }


# ---------------------------------------------------------------------------
# JSON export/import (round-trippable)

def dataset_to_jsonable(dataset: Dataset) -> dict:
    return {
        "id": dataset.id,
        "schema": {
            "time_field": dataset.schema.time_field,
            "categorical_fields": list(dataset.schema.categorical_fields),
            "measure_fields": list(dataset.schema.measure_fields),
        },
        "global_extents": {
            "time": list(dataset.global_extents.time),
            "measures": [list(m) for m in dataset.global_extents.measures],
        },
        "signals": [
            {
                "id": s.id,
                "dims": s.dims,
                "t": s.t.tolist(),
                "y": s.y.tolist(),
            }
            for s in dataset.signals
        ],
    }


def dataset_from_jsonable(obj: dict) -> Dataset:
    schema = Schema(
        time_field=obj["schema"]["time_field"],
        categorical_fields=tuple(obj["schema"]["categorical_fields"]),
        measure_fields=tuple(obj["schema"]["measure_fields"]),
    )
    signals = tuple(
        Signal(id=s["id"], dims=dict(s["dims"]), t=np.array(s["t"]), y=np.array(s["y"]))
        for s in obj["signals"]
    )
    extents = Extents(
        time=tuple(obj["global_extents"]["time"]),
        measures=tuple(tuple(m) for m in obj["global_extents"]["measures"]),
    )
    return Dataset(id=obj["id"], schema=schema, signals=signals, global_extents=extents)


def save_dataset(dataset: Dataset, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_jsonable(dataset), fh)


def load_dataset(path: str) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return dataset_from_jsonable(json.load(fh))


def dataset_to_csv(dataset: Dataset) -> str:
    """Inverse of load_csv (timestamps rendered as ISO-8601)."""
    schema = dataset.schema
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [schema.time_field, *schema.categorical_fields, *schema.measure_fields]
    )
    for s in dataset.signals:
        dims = [s.dims[f] for f in schema.categorical_fields]
        for k in range(s.n_points):
            writer.writerow(
                [format_timestamp(float(s.t[k])), *dims]
                + [repr(float(v)) for v in s.y[k]]
            )
    return out.getvalue()
