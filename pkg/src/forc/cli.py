"""Command-line pipeline driver.

Subcommands mirror the pipeline stages (ingest, stats, resolve, enrich,
assemble, evaluate) plus `pipeline`, which chains them over file-based
intermediates.  Every stage writes a manifest recording input/output
digests, the effective configuration and its hash, and row counts, so
cache_only and fixture runs can be reproduced byte for byte.

Configuration comes from defaults, then an optional key=value config
file (--config), then flags; later sources win.  Secrets never go in
config files: the S2AG API key and the polite-pool contact e-mail are
read from the FORC_S2AG_API_KEY and FORC_CONTACT_EMAIL environment
variables only.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import assemble as assemble_mod
from . import ingest as ingest_mod
from . import metrics as metrics_mod
from . import providers as providers_mod
from . import resolve as resolve_mod
from .model import load_taxonomy, read_bundles, read_records, write_bundles, write_records
from .wordpiece import load_vocabulary

logger = logging.getLogger(__name__)

DEFAULTS = {
    "split": "train",
    "source_set": "ta+s2ag+oa+cr",
    "budget": 512,
    "mode": "live",
    "concurrency": 4,
    "cache_dir": "cache",
    "error_tolerance": 1.0,
    "threshold": resolve_mod.DEFAULT_SIMILARITY_THRESHOLD,
}

_CONFIG_KEYS = set(DEFAULTS) | {
    "input",
    "output",
    "taxonomy",
    "vocab",
    "bundles",
    "gold",
    "pred",
}

_INT_KEYS = {"budget", "concurrency"}
_FLOAT_KEYS = {"error_tolerance", "threshold"}


class CliError(RuntimeError):
    """Fatal, user-facing configuration or input problem."""


def parse_config_file(path: str | Path) -> dict:
    """Read a key=value config file; # starts a comment, blanks ignored."""
    values: dict = {}
    for line_number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise CliError(f"{path}:{line_number}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise CliError(f"{path}:{line_number}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in _INT_KEYS:
        return int(value)
    if key in _FLOAT_KEYS:
        return float(value)
    return value


def resolve_config(args: argparse.Namespace) -> dict:
    """Layer defaults, config file, then flags; flags win."""
    effective = dict(DEFAULTS)
    if getattr(args, "config", None):
        if not Path(args.config).exists():
            raise CliError(f"config file not found: {args.config}")
        effective.update(parse_config_file(args.config))
    for key in _CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            effective[key] = flag_value
    return {k: _coerce(k, v) for k, v in effective.items()}


def _config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, ensure_ascii=False, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _file_digest(path: Path) -> dict:
    data = path.read_bytes()
    return {"sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}


def write_manifest(
    manifest_path: Path,
    stage: str,
    config: dict,
    inputs: Sequence[Path],
    outputs: Sequence[Path],
    counts: dict,
) -> None:
    manifest = {
        "stage": stage,
        "config": {k: config[k] for k in sorted(config)},
        "config_hash": _config_hash(config),
        "inputs": {str(p): _file_digest(Path(p)) for p in inputs if Path(p).exists()},
        "outputs": {str(p): _file_digest(Path(p)) for p in outputs if Path(p).exists()},
        "counts": counts,
    }
    manifest_path.write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def _require(config: dict, *keys: str) -> None:
    missing = [k for k in keys if not config.get(k)]
    if missing:
        raise CliError(f"missing required option(s): {', '.join('--' + k.replace('_', '-') for k in missing)}")


def _check_input(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise CliError(f"input file not found: {path}")
    return p


def _load_taxonomy_arg(config: dict):
    if config.get("taxonomy"):
        return load_taxonomy(_check_input(config["taxonomy"]))
    return None


def _make_clients(config: dict, cache_dir: Optional[str] = None):
    return providers_mod.make_clients(
        cache_dir=cache_dir or config["cache_dir"],
        mode=config["mode"],
        contact=os.environ.get(providers_mod.CONTACT_EMAIL_ENV),
        s2ag_api_key=os.environ.get(providers_mod.S2AG_API_KEY_ENV),
    )


def _read_label_map(path: Path) -> dict:
    labels = {}
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            if not line.strip():
                continue
            row = json.loads(line)
            row_id = row.get("id") or row.get("record_id")
            if row_id is None or row.get("label") is None:
                raise CliError(f"{path}:{line_number}: row needs both id and label")
            labels[str(row_id)] = str(row["label"])
    return labels


# ---------------------------------------------------------------------------
# Stage implementations (shared between subcommands and `pipeline`)
# ---------------------------------------------------------------------------

def _stage_ingest(config: dict, output: Path) -> ingest_mod.IngestResult:
    source = _check_input(config["input"])
    taxonomy = _load_taxonomy_arg(config)
    result = ingest_mod.ingest(source, split=config["split"], taxonomy=taxonomy)
    write_records(result.records, output)
    outputs = [output]
    if result.errors:
        errors_path = output.with_suffix(".errors.jsonl")
        with open(errors_path, "w", encoding="utf-8") as handle:
            for error in result.errors:
                handle.write(
                    json.dumps({"row": error.row_number, "reason": error.reason}) + "\n"
                )
        outputs.append(errors_path)
        logger.warning("%d of %d rows rejected", len(result.errors), result.row_count)
    write_manifest(
        Path(str(output) + ".manifest.json"),
        "ingest",
        config,
        inputs=[source],
        outputs=outputs,
        counts={"rows": result.row_count, "records": len(result.records), "errors": len(result.errors)},
    )
    return result


def _stage_resolve(config: dict, records, output: Path):
    client = _make_clients(config)["openalex"]
    outcomes, summary = resolve_mod.resolve_all(
        records, client, concurrency=config["concurrency"], threshold=config["threshold"]
    )
    updated = resolve_mod.apply_outcomes(records, outcomes)
    write_records(updated, output)
    outcomes_path = output.with_suffix(".outcomes.jsonl")
    resolve_mod.write_outcomes(outcomes_path, outcomes)
    report_path = output.with_suffix(".report.json")
    report_path.write_text(
        json.dumps(summary.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    write_manifest(
        Path(str(output) + ".manifest.json"),
        "resolve",
        config,
        inputs=[Path(config["input"])] if config.get("input") else [],
        outputs=[output, outcomes_path, report_path],
        counts=summary.as_dict()["per_status"],
    )
    return updated, summary


def _stage_enrich(config: dict, records, output: Path):
    clients = _make_clients(config)
    bundles, summary = providers_mod.enrich_all(
        records, clients, concurrency=config["concurrency"]
    )
    write_bundles(bundles, output)
    write_manifest(
        Path(str(output) + ".manifest.json"),
        "enrich",
        config,
        inputs=[Path(config["input"])] if config.get("input") else [],
        outputs=[output],
        counts=summary.as_dict(),
    )
    attempted = summary.records - summary.skipped
    if attempted:
        failures = len(summary.errors)
        if failures / attempted > config["error_tolerance"]:
            raise CliError(
                f"enrichment failures {failures}/{attempted} exceed tolerance "
                f"{config['error_tolerance']}"
            )
    return bundles, summary


def _stage_assemble(config: dict, records, bundles, output: Path):
    _require(config, "vocab")
    vocab = load_vocabulary(_check_input(config["vocab"]))
    source_set = assemble_mod.parse_source_set(config["source_set"])
    bundle_map = {b.record_id: b for b in bundles}
    items, stats = assemble_mod.assemble_all(
        records, bundle_map, source_set, vocab, budget=config["budget"]
    )
    assemble_mod.write_assembled(output, items)
    write_manifest(
        Path(str(output) + ".manifest.json"),
        "assemble",
        config,
        inputs=[Path(p) for p in (config.get("input"), config.get("bundles"), config.get("vocab")) if p],
        outputs=[output],
        counts=stats.as_dict(),
    )
    return items, stats


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    config = resolve_config(args)
    _require(config, "input", "output")
    _stage_ingest(config, Path(config["output"]))
    return 0


def cmd_stats(args) -> int:
    config = resolve_config(args)
    _require(config, "input")
    source = _check_input(config["input"])
    taxonomy = _load_taxonomy_arg(config)
    if source.suffix.lower() == ".jsonl":
        records = read_records(source)
    else:
        records = ingest_mod.ingest(source, split=config["split"], taxonomy=taxonomy).records
    stats = ingest_mod.compute_stats(records, taxonomy)
    print(ingest_mod.render_stats_table(stats))
    payload = ingest_mod.stats_to_json(stats)
    if config.get("output"):
        Path(config["output"]).write_text(payload + "\n", encoding="utf-8")
    else:
        print()
        print(payload)
    return 0


def cmd_resolve(args) -> int:
    config = resolve_config(args)
    _require(config, "input", "output")
    records = read_records(_check_input(config["input"]))
    _stage_resolve(config, records, Path(config["output"]))
    return 0


def cmd_enrich(args) -> int:
    config = resolve_config(args)
    _require(config, "input", "output")
    records = read_records(_check_input(config["input"]))
    _stage_enrich(config, records, Path(config["output"]))
    return 0


def cmd_assemble(args) -> int:
    config = resolve_config(args)
    _require(config, "input", "output")
    records = read_records(_check_input(config["input"]))
    bundles = read_bundles(_check_input(config["bundles"])) if config.get("bundles") else []
    _stage_assemble(config, records, bundles, Path(config["output"]))
    return 0


def cmd_evaluate(args) -> int:
    config = resolve_config(args)
    _require(config, "gold", "pred")
    gold = _read_label_map(_check_input(config["gold"]))
    pred = _read_label_map(_check_input(config["pred"]))
    taxonomy = _load_taxonomy_arg(config)
    try:
        report = metrics_mod.evaluate(gold, pred, taxonomy)
    except metrics_mod.EvaluationError as exc:
        raise CliError(str(exc)) from exc
    print(metrics_mod.render_table(report))
    if config.get("output"):
        Path(config["output"]).write_text(
            metrics_mod.report_to_json(report) + "\n", encoding="utf-8"
        )
    return 0


def cmd_pipeline(args) -> int:
    config = resolve_config(args)
    _require(config, "input", "output", "vocab")
    out_dir = Path(config["output"])
    out_dir.mkdir(parents=True, exist_ok=True)

    stage_config = dict(config)
    result = _stage_ingest(config, out_dir / "records.jsonl")
    records = list(result.records)

    stage_config["input"] = str(out_dir / "records.jsonl")
    records, resolution = _stage_resolve(stage_config, records, out_dir / "resolved.jsonl")

    stage_config["input"] = str(out_dir / "resolved.jsonl")
    bundles, enrichment = _stage_enrich(stage_config, records, out_dir / "bundles.jsonl")

    stage_config["input"] = str(out_dir / "resolved.jsonl")
    stage_config["bundles"] = str(out_dir / "bundles.jsonl")
    items, assembly = _stage_assemble(
        stage_config, records, bundles, out_dir / "assembled.jsonl"
    )

    taxonomy = _load_taxonomy_arg(config)
    stats = ingest_mod.compute_stats(records, taxonomy)
    (out_dir / "stats.json").write_text(ingest_mod.stats_to_json(stats) + "\n", encoding="utf-8")

    write_manifest(
        out_dir / "pipeline.manifest.json",
        "pipeline",
        config,
        inputs=[Path(config["input"])],
        outputs=[
            out_dir / "records.jsonl",
            out_dir / "resolved.jsonl",
            out_dir / "bundles.jsonl",
            out_dir / "assembled.jsonl",
            out_dir / "stats.json",
        ],
        counts={
            "records": len(records),
            "ingest_errors": len(result.errors),
            "resolution": resolution.as_dict()["per_status"],
            "enrichment": enrichment.as_dict()["per_provider"],
            "assembly": assembly.as_dict(),
        },
    )
    logger.info("pipeline complete: %d records -> %d assembled inputs", len(records), len(items))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forc",
        description="Metadata enrichment and input assembly pipeline for research-field classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, flags: Sequence[str]):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--config", help="key=value config file; flags override it")
        for flag in flags:
            key = flag.replace("-", "_")
            kwargs = {}
            if key in _INT_KEYS:
                kwargs["type"] = int
            elif key in _FLOAT_KEYS:
                kwargs["type"] = float
            p.add_argument(f"--{flag}", dest=key, **kwargs)
        return p

    common = ["input", "output", "taxonomy"]
    network = ["mode", "concurrency", "cache-dir"]
    add("ingest", cmd_ingest, "parse a dataset file into canonical records", common + ["split"])
    add("stats", cmd_stats, "dataset statistics from a dataset or records file", common + ["split"])
    add("resolve", cmd_resolve, "fill missing DOIs by title search", common + network + ["threshold"])
    add("enrich", cmd_enrich, "fetch provider metadata for records with DOIs", common + network + ["error-tolerance"])
    add(
        "assemble",
        cmd_assemble,
        "build classifier input text from records and bundles",
        common + ["bundles", "source-set", "vocab", "budget"],
    )
    add("evaluate", cmd_evaluate, "score a predictions file against gold labels", ["gold", "pred", "taxonomy", "output"])
    add(
        "pipeline",
        cmd_pipeline,
        "run ingest, resolve, enrich, and assemble into an output directory",
        common + network + ["split", "source-set", "vocab", "budget", "threshold", "error-tolerance"],
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        _print_error(args.command, "config", exc)
        return 1
    except (OSError, ValueError) as exc:
        _print_error(args.command, type(exc).__name__, exc)
        return 1


def _print_error(stage: str, kind: str, exc: Exception) -> None:
    summary = {"error": {"stage": stage, "type": kind, "message": str(exc)}}
    print(json.dumps(summary, ensure_ascii=False), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
