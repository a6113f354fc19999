"""Shared JSON (de)serialization used by both the CLI and the HTTP
service, so the two surfaces emit byte-identical bodies."""
from __future__ import annotations

import json

from .clustering import ClusterReport, Cut
from .errors import ValidationError
from .model import (
    AlignmentResult,
    Extents,
    NormalizationMode,
    PenaltyConfig,
    RankedMatches,
)
from .proximity import (
    CanvasSpace,
    PSConnector,
    PSElement,
    PSSpace,
    ResolutionSet,
    SemanticSpace,
    TemporalSpace,
)
from .search import Viewport

PENALTY_KEYS = ("w_len", "w_mid", "w_time", "w_vel", "w_skip", "w_count", "w_stretch")


def dump_json(payload) -> str:
    return json.dumps(payload, separators=(",", ":"), sort_keys=True)


def penalty_config_from_jsonable(obj: dict | None, default_mode: NormalizationMode | None = None) -> PenaltyConfig:
    """Build a PenaltyConfig from a partial JSON object; omitted keys
    keep their defaults."""
    obj = dict(obj or {})
    kwargs = {}
    for key in PENALTY_KEYS + ("epsilon", "v_max"):
        if key in obj:
            kwargs[key] = float(obj.pop(key))
    if "mode" in obj:
        kwargs["mode"] = normalization_mode_from_jsonable(obj.pop("mode"))
    elif default_mode is not None:
        kwargs["mode"] = default_mode
    if obj:
        raise ValidationError(f"unknown penalty config keys: {sorted(obj)}")
    return PenaltyConfig(**kwargs)


def normalization_mode_from_jsonable(obj) -> NormalizationMode:
    if isinstance(obj, str):
        if obj != "local":
            raise ValidationError("global mode requires extents; pass an object")
        return NormalizationMode.local()
    kind = obj.get("kind")
    if kind == "local":
        return NormalizationMode.local()
    if kind == "global":
        ext = obj["extents"]
        return NormalizationMode.global_(
            Extents(
                time=tuple(ext["time"]),
                measures=tuple(tuple(m) for m in ext["measures"]),
            )
        )
    raise ValidationError(f"unknown normalization mode {kind!r}")


def normalization_mode_to_jsonable(mode: NormalizationMode):
    if mode.kind == "local":
        return {"kind": "local"}
    return {
        "kind": "global",
        "extents": {
            "time": list(mode.extents.time),
            "measures": [list(m) for m in mode.extents.measures],
        },
    }


def viewport_from_jsonable(obj: dict | None) -> Viewport | None:
    if obj is None:
        return None
    return Viewport(
        width=float(obj["width"]),
        height=float(obj["height"]),
        t_range=tuple(obj["t_range"]),
        value_range=tuple(obj["value_range"]),
    )


def alignment_to_jsonable(result: AlignmentResult) -> dict:
    return {
        "score": result.score,
        "matches": [list(p) for p in result.matches],
        "skipped_interior": [list(p) for p in result.skipped_interior],
        "skipped_boundary": [list(p) for p in result.skipped_boundary],
    }


def ranked_to_jsonable(ranked: RankedMatches, alignments: dict[str, AlignmentResult] | None = None) -> list[dict]:
    out = []
    for sid, score in ranked.entries:
        entry = {"signal_id": sid, "score": score}
        if alignments is not None:
            entry["alignment"] = alignment_to_jsonable(alignments[sid])
        out.append(entry)
    return out


def cluster_report_to_jsonable(report: ClusterReport) -> dict:
    return {
        "linkage": report.linkage,
        "cut": {"k": report.cut.k, "tau": report.cut.tau},
        "clusters": [
            {"member_ids": list(c.member_ids), "medoid_id": c.medoid_id}
            for c in report.clusters
        ],
        "merges": [
            {"left": list(m.left), "right": list(m.right), "distance": m.distance}
            for m in report.merges
        ],
    }


def cut_from_jsonable(obj: dict) -> Cut:
    return Cut(
        k=None if obj.get("k") is None else int(obj["k"]),
        tau=None if obj.get("tau") is None else float(obj["tau"]),
    )


def resolution_to_jsonable(res: ResolutionSet) -> dict:
    return {"candidates": sorted(res.candidates), "cardinality": res.cardinality}


def element_from_jsonable(obj: dict) -> PSElement:
    return PSElement(
        id=str(obj["id"]),
        kind=str(obj["kind"]),
        position=(float(obj["position"][0]), float(obj["position"][1])),
        text=obj.get("text"),
        timestamp=None if obj.get("timestamp") is None else float(obj["timestamp"]),
    )


def connector_from_jsonable(obj: dict) -> PSConnector:
    return PSConnector(
        from_anchor=tuple(float(v) for v in obj["from_anchor"]),
        to_anchor=tuple(float(v) for v in obj["to_anchor"]),
    )


def space_from_jsonable(obj: dict) -> PSSpace:
    kind = obj.get("kind")
    if kind == "canvas":
        return CanvasSpace(
            threshold=float(obj["threshold"]), snap_radius=float(obj["snap_radius"])
        )
    if kind == "semantic":
        return SemanticSpace(threshold=float(obj["threshold"]))
    if kind == "temporal":
        return TemporalSpace(threshold=float(obj["threshold"]))
    raise ValidationError(f"unknown space kind {kind!r}")


def scene_from_jsonable(obj: dict):
    """Parse a PS scene document: query id, elements, connectors, spaces."""
    elements = [element_from_jsonable(e) for e in obj["elements"]]
    connectors = [connector_from_jsonable(c) for c in obj.get("connectors", [])]
    spaces = [space_from_jsonable(s) for s in obj["spaces"]]
    query_id = obj["query_id"]
    by_id = {e.id: e for e in elements}
    if query_id not in by_id:
        raise ValidationError(f"query element {query_id!r} not present in elements")
    query = by_id[query_id]
    rest = [e for e in elements if e.id != query_id]
    return query, rest, connectors, spaces
