"""HTTP JSON API binding the library into the interactive query loop.

Datasets and indexes live in an in-memory registry; every endpoint is a
deterministic function of the registry contents plus the request body.
Indexes are immutable: re-indexing creates a new id.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, File, Form, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import constraints as cst
from . import serialize as ser
from .clustering import agglomerate
from .errors import (
    ConstraintError,
    DegenerateSketchError,
    IngestError,
    StaleIndexError,
    TrendsketchError,
    ValidationError,
)
from .ingest import ColumnMapping, dataset_summary, load_csv
from .model import Dataset, PenaltyConfig
from .search import DEFAULT_K, Index, build_index, pairwise_matrix, query

import json


@dataclass
class Registry:
    datasets: dict[str, Dataset] = field(default_factory=dict)
    indexes: dict[str, tuple[Index, PenaltyConfig, str]] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)
    _counter: itertools.count = field(default_factory=lambda: itertools.count(1))

    def add_dataset(self, dataset: Dataset) -> str:
        with self._lock:
            ds_id = f"ds-{next(self._counter):04d}"
            self.datasets[ds_id] = dataset
            return ds_id

    def add_index(self, index: Index, cfg: PenaltyConfig, ds_id: str) -> str:
        with self._lock:
            idx_id = f"idx-{next(self._counter):04d}"
            self.indexes[idx_id] = (index, cfg, ds_id)
            return idx_id


def _json(payload, status_code: int = 200) -> Response:
    return Response(
        content=ser.dump_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, message: str) -> Response:
    return JSONResponse(status_code=status_code, content={"detail": message})


def create_app() -> FastAPI:
    app = FastAPI(title="trendsketch")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = Registry()
    app.state.registry = registry

    @app.exception_handler(TrendsketchError)
    async def handle_domain_error(_request, exc: TrendsketchError):
        if isinstance(exc, ConstraintError):
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        if isinstance(exc, StaleIndexError):
            return JSONResponse(status_code=409, content={"detail": str(exc)})
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/healthz")
    async def healthz():
        return _json({"status": "ok"})

    @app.post("/datasets", status_code=201)
    async def post_dataset(file: bytes = File(...), mapping: str = Form(...)):
        try:
            m = json.loads(mapping)
            col_mapping = ColumnMapping(
                time_field=m["time_field"],
                categorical_fields=tuple(m["categorical_fields"]),
                measure_fields=tuple(m["measure_fields"]),
                id_field=m.get("id_field"),
                time_format=m.get("time_format", "auto"),
            )
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            return _error(400, f"bad mapping: {exc}")
        try:
            result = load_csv(file, col_mapping)
        except IngestError as exc:
            return _error(400, str(exc))
        ds_id = registry.add_dataset(result.dataset)
        return _json(
            {
                "dataset_id": ds_id,
                "summary": dataset_summary(result.dataset),
                "warnings": result.warnings,
            },
            status_code=201,
        )

    @app.get("/datasets/{dataset_id}/signals")
    async def get_signals(dataset_id: str, limit: int = 50, offset: int = 0):
        dataset = registry.datasets.get(dataset_id)
        if dataset is None:
            return _error(404, f"unknown dataset {dataset_id!r}")
        page = dataset.signals[offset:offset + limit]
        return _json(
            {
                "total": len(dataset.signals),
                "offset": offset,
                "signals": [
                    {
                        "id": s.id,
                        "dims": s.dims,
                        "n_points": s.n_points,
                        "time_extent": [float(s.t[0]), float(s.t[-1])],
                    }
                    for s in page
                ],
            }
        )

    @app.get("/datasets/{dataset_id}/signals/{signal_id}/points")
    async def get_signal_points(dataset_id: str, signal_id: str):
        dataset = registry.datasets.get(dataset_id)
        if dataset is None:
            return _error(404, f"unknown dataset {dataset_id!r}")
        try:
            s = dataset.signal_by_id(signal_id)
        except KeyError:
            return _error(404, f"unknown signal {signal_id!r}")
        return _json({"id": s.id, "t": s.t.tolist(), "y": s.y.tolist()})

    @app.post("/datasets/{dataset_id}/index", status_code=201)
    async def post_index(dataset_id: str, request: Request):
        dataset = registry.datasets.get(dataset_id)
        if dataset is None:
            return _error(404, f"unknown dataset {dataset_id!r}")
        body = await request.json()
        cfg = ser.penalty_config_from_jsonable(body.get("penalty_config"))
        if cfg.mode.kind == "global" and cfg.mode.extents is None:
            return _error(400, "global mode requires extents")
        index = build_index(dataset, cfg)
        idx_id = registry.add_index(index, cfg, dataset_id)
        return _json(
            {
                "index_id": idx_id,
                "indexed": len(index.entries),
                "unindexable": [
                    {"signal_id": sid, "reason": reason}
                    for sid, reason in index.unindexable
                ],
            },
            status_code=201,
        )

    def _resolve_index(index_id: str):
        item = registry.indexes.get(index_id)
        if item is None:
            return None, _error(404, f"unknown index {index_id!r}")
        return item, None

    def _query_config(body: dict, index: Index, build_cfg: PenaltyConfig) -> PenaltyConfig:
        # omitted (mode, epsilon) default to the index build config;
        # explicit mismatches still trip the 409 stale-index check
        obj = dict(body.get("penalty_config") or {})
        obj.setdefault("epsilon", index.epsilon)
        return ser.penalty_config_from_jsonable(obj, default_mode=index.mode)

    @app.post("/indexes/{index_id}/query")
    async def post_query(index_id: str, request: Request):
        item, err = _resolve_index(index_id)
        if err is not None:
            return err
        index, build_cfg, ds_id = item
        body = await request.json()
        cfg = _query_config(body, index, build_cfg)
        k = int(body.get("k", DEFAULT_K))
        viewport = ser.viewport_from_jsonable(body.get("viewport"))
        try:
            ranked, alignments = query(
                index, body["sketch_points"], cfg, k=k,
                viewport=viewport, with_alignments=True,
            )
        except (DegenerateSketchError, ValidationError) as exc:
            return _error(400, str(exc))

        dropped = 0
        raw_constraint = body.get("constraint")
        if raw_constraint is not None:
            dataset = registry.datasets[ds_id]
            schema = dataset.schema
            if isinstance(raw_constraint, str):
                expr = cst.parse_constraint(raw_constraint, schema)
            else:
                expr = cst.from_jsonable(raw_constraint, schema)
            allowed = cst.allowed_ids(expr, dataset.signals, schema)
            filtered = cst.intersect(ranked, allowed)
            dropped = len(ranked.entries) - len(filtered.entries)
            ranked = filtered
            alignments = {sid: alignments[sid] for sid, _ in ranked.entries}
        return _json(
            {
                "matches": ser.ranked_to_jsonable(ranked, alignments),
                "dropped_by_constraint": dropped,
            }
        )

    @app.post("/indexes/{index_id}/cluster")
    async def post_cluster(index_id: str, request: Request):
        item, err = _resolve_index(index_id)
        if err is not None:
            return err
        index, build_cfg, _ds_id = item
        body = await request.json()
        cfg = _query_config(body, index, build_cfg)
        cut = ser.cut_from_jsonable(body.get("cut") or {"k": min(8, len(index.entries))})
        matrix = pairwise_matrix(index, cfg)
        report = agglomerate(matrix, cut, ids=index.signal_ids)
        payload = ser.cluster_report_to_jsonable(report)
        if body.get("include_matrix"):
            payload["matrix"] = {
                "ids": index.signal_ids,
                "values": matrix.values.tolist(),
            }
        return _json(payload)

    @app.post("/ps/resolve")
    async def post_resolve(request: Request):
        from .proximity import resolve

        body = await request.json()
        try:
            q, elements, connectors, spaces = ser.scene_from_jsonable(body)
        except (KeyError, TypeError) as exc:
            return _error(400, f"bad scene document: {exc}")
        result = resolve(q, elements, connectors, spaces)
        return _json(ser.resolution_to_jsonable(result))

    return app


app = create_app()
