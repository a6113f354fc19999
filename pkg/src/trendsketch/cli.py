"""Batch command-line interface over the same library code the HTTP
service uses. Exit codes: 2 usage error, 3 data error."""
from __future__ import annotations

import functools
import json
import sys

import click

from . import constraints as cst
from . import serialize as ser
from .clustering import Cut, agglomerate
from .errors import TrendsketchError
from .ingest import ColumnMapping, dataset_summary, load_csv, load_dataset, save_dataset
from .model import NormalizationMode, PenaltyConfig
from .proximity import resolve
from .search import DEFAULT_K, build_index, pairwise_matrix, query

DATA_ERROR_EXIT = 3


def data_errors_to_exit_code(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (TrendsketchError, OSError, json.JSONDecodeError, KeyError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(DATA_ERROR_EXIT)
    return wrapper


@click.group()
def main():
    """Sketch-based trend search over time-series signals."""


@main.command()
@click.option("--csv", "csv_path", required=True, type=click.Path(), help="input CSV file")
@click.option("--time", "time_field", required=True, help="time column name")
@click.option("--dims", required=True, help="comma-separated categorical columns")
@click.option("--measures", required=True, help="comma-separated measure columns")
@click.option("--id-field", default=None, help="explicit signal id column")
@click.option("--time-format", default="auto", type=click.Choice(["auto", "iso", "year"]))
@click.option("--out", "out_path", required=True, type=click.Path(), help="output dataset JSON")
@data_errors_to_exit_code
def ingest(csv_path, time_field, dims, measures, id_field, time_format, out_path):
    """Load a CSV corpus into a dataset file."""
    with open(csv_path, "rb") as fh:
        data = fh.read()
    mapping = ColumnMapping(
        time_field=time_field,
        categorical_fields=tuple(d.strip() for d in dims.split(",") if d.strip()),
        measure_fields=tuple(m.strip() for m in measures.split(",") if m.strip()),
        id_field=id_field,
        time_format=time_format,
    )
    result = load_csv(data, mapping)
    for w in result.warnings:
        click.echo(f"warning: {w}", err=True)
    save_dataset(result.dataset, out_path)
    click.echo(ser.dump_json({"dataset": out_path, "summary": dataset_summary(result.dataset)}))


def _mode_from_options(mode_name: str, dataset) -> NormalizationMode:
    if mode_name == "local":
        return NormalizationMode.local()
    return NormalizationMode.global_(dataset.global_extents)


@main.command("index")
@click.option("--dataset", "dataset_path", required=True, type=click.Path())
@click.option("--epsilon", default=PenaltyConfig().epsilon, type=float, show_default=True)
@click.option("--mode", default="local", type=click.Choice(["local", "global"]), show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(), help="output index JSON")
@data_errors_to_exit_code
def index_cmd(dataset_path, epsilon, mode, out_path):
    """Precompute a search index for a dataset.

    The index file embeds the dataset and the (mode, epsilon) build
    config; query/cluster rebuild the in-memory index deterministically.
    """
    dataset = load_dataset(dataset_path)
    norm_mode = _mode_from_options(mode, dataset)
    cfg = PenaltyConfig(epsilon=epsilon, mode=norm_mode)
    index = build_index(dataset, cfg)  # validates now, fails early
    from .ingest import dataset_to_jsonable

    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "dataset": dataset_to_jsonable(dataset),
                "epsilon": epsilon,
                "mode": ser.normalization_mode_to_jsonable(norm_mode),
            },
            fh,
        )
    click.echo(ser.dump_json({
        "index": out_path,
        "indexed": len(index.entries),
        "unindexable": [{"signal_id": s, "reason": r} for s, r in index.unindexable],
    }))


def _load_index_file(path: str):
    from .ingest import dataset_from_jsonable

    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    dataset = dataset_from_jsonable(obj["dataset"])
    mode = ser.normalization_mode_from_jsonable(obj["mode"])
    return dataset, mode, float(obj["epsilon"])


def _build_cfg(mode, epsilon, penalties_json: str | None) -> PenaltyConfig:
    obj = json.loads(penalties_json) if penalties_json else {}
    obj["epsilon"] = epsilon
    obj.pop("mode", None)  # mode always comes from the index file
    return ser.penalty_config_from_jsonable(obj, default_mode=mode)


@main.command("query")
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--sketch", "sketch_path", required=True, type=click.Path(),
              help='polyline JSON: {"points": [[x, y], ...]}')
@click.option("--k", default=DEFAULT_K, type=int, show_default=True)
@click.option("--constraint", default=None, help="constraint expression text")
@click.option("--penalties", default=None, help="JSON object of penalty weights")
@click.option("--viewport", default=None, help="JSON viewport for global mode")
@data_errors_to_exit_code
def query_cmd(index_path, sketch_path, k, constraint, penalties, viewport):
    """Rank indexed signals against a sketch; one JSON match per line."""
    dataset, mode, epsilon = _load_index_file(index_path)
    cfg = _build_cfg(mode, epsilon, penalties)
    index = build_index(dataset, cfg)
    with open(sketch_path, encoding="utf-8") as fh:
        points = json.load(fh)["points"]
    vp = ser.viewport_from_jsonable(json.loads(viewport)) if viewport else None
    ranked, alignments = query(index, points, cfg, k=k, viewport=vp, with_alignments=True)
    if constraint:
        expr = cst.parse_constraint(constraint, dataset.schema)
        allowed = cst.allowed_ids(expr, dataset.signals, dataset.schema)
        ranked = cst.intersect(ranked, allowed)
        alignments = {sid: alignments[sid] for sid, _ in ranked.entries}
    for entry in ser.ranked_to_jsonable(ranked, alignments):
        click.echo(ser.dump_json(entry))


@main.command("cluster")
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--k", default=None, type=int, help="target cluster count")
@click.option("--tau", default=None, type=float, help="merge distance threshold")
@click.option("--penalties", default=None, help="JSON object of penalty weights")
@data_errors_to_exit_code
def cluster_cmd(index_path, k, tau, penalties):
    """Cluster all indexed signals by pairwise alignment score."""
    dataset, mode, epsilon = _load_index_file(index_path)
    cfg = _build_cfg(mode, epsilon, penalties)
    index = build_index(dataset, cfg)
    if k is None and tau is None:
        k = min(8, len(index.entries))
    cut = Cut(k=k, tau=tau)
    matrix = pairwise_matrix(index, cfg)
    report = agglomerate(matrix, cut, ids=index.signal_ids)
    click.echo(ser.dump_json(ser.cluster_report_to_jsonable(report)))


@main.command("ps-resolve")
@click.option("--scene", "scene_path", required=True, type=click.Path(),
              help="scene JSON: {query_id, elements, connectors, spaces}")
@data_errors_to_exit_code
def ps_resolve_cmd(scene_path):
    """Resolve a deictic reference through proximity-binding chains."""
    with open(scene_path, encoding="utf-8") as fh:
        obj = json.load(fh)
    q, elements, connectors, spaces = ser.scene_from_jsonable(obj)
    result = resolve(q, elements, connectors, spaces)
    click.echo(ser.dump_json(ser.resolution_to_jsonable(result)))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve_cmd(host, port):
    """Run the HTTP JSON API."""
    import uvicorn

    uvicorn.run("trendsketch.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
