"""Dataset file ingestion and corpus statistics.

Reads the shared-task CSV exports (or canonical JSONL) into
PublicationRecords.  Bad rows are never dropped silently: every data row
ends up either as a record or as a (row number, reason) error.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .model import (
    LabelTaxonomy,
    PublicationRecord,
    normalize_doi,
    record_from_json,
)

logger = logging.getLogger(__name__)

# Header mapping is configuration, not guesswork: lowercased CSV headers
# are looked up here and unknown columns are ignored.  Callers with
# differently spelled exports pass their own mapping.
DEFAULT_COLUMN_MAP: Mapping[str, str] = {
    "id": "id",
    "title": "title",
    "abstract": "abstract",
    "author": "author",
    "authors": "author",
    "doi": "doi",
    "url": "url",
    "publication month": "publication_month",
    "publication_month": "publication_month",
    "publication year": "publication_year",
    "publication_year": "publication_year",
    "publisher": "publisher",
    "label": "label",
}

_INT_FIELDS = ("publication_month", "publication_year")


@dataclass(frozen=True)
class RowError:
    row_number: int
    reason: str


@dataclass(frozen=True)
class IngestResult:
    records: tuple[PublicationRecord, ...]
    errors: tuple[RowError, ...]

    @property
    def row_count(self) -> int:
        return len(self.records) + len(self.errors)


@dataclass(frozen=True)
class DatasetStats:
    """Corpus-level counts; fractions in per_group are over labeled rows."""

    total: int
    per_split: Mapping[str, int]
    per_label: Mapping[str, int]
    per_group: Mapping[str, float]
    missing_doi: Mapping[str, int]
    missing_abstract: Mapping[str, int]

    def __post_init__(self) -> None:
        if sum(self.per_split.values()) != self.total:
            raise ValueError("per_split counts do not sum to total")
        if self.per_group:
            drift = abs(sum(self.per_group.values()) - 1.0)
            if drift > 1e-9:
                raise ValueError(f"per_group fractions sum to 1 ± 1e-9 violated ({drift})")


def ingest(
    path: str | Path,
    split: str,
    taxonomy: Optional[LabelTaxonomy] = None,
    column_map: Optional[Mapping[str, str]] = None,
) -> IngestResult:
    """Parse a .csv or .jsonl dataset file into records plus row errors.

    ``split`` tags rows that do not carry their own split field.  Row
    numbers are 1-based over data rows (the CSV header is not a data
    row).  An unreadable file raises; per-row problems (missing title,
    unknown label, malformed JSON line) become RowErrors.
    """
    path = Path(path)
    if path.suffix.lower() == ".jsonl":
        rows = _iter_jsonl_rows(path)
    else:
        rows = _iter_csv_rows(path, column_map or DEFAULT_COLUMN_MAP)

    records: list[PublicationRecord] = []
    errors: list[RowError] = []
    for row_number, raw, parse_error in rows:
        if parse_error is not None:
            errors.append(RowError(row_number, parse_error))
            continue
        try:
            records.append(_build_record(raw, split, row_number, taxonomy))
        except ValueError as exc:
            errors.append(RowError(row_number, str(exc)))
    return IngestResult(records=tuple(records), errors=tuple(errors))


def _iter_csv_rows(path: Path, column_map: Mapping[str, str]):
    # utf-8-sig tolerates the BOM some spreadsheet exports prepend
    with open(path, encoding="utf-8-sig", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, no header row")
        fields = [column_map.get(h.strip().lower()) for h in header]
        if "title" not in fields:
            raise ValueError(f"{path}: header has no title column")
        for row_number, cells in enumerate(reader, start=1):
            raw = {}
            for field, cell in zip(fields, cells):
                if field is not None and cell.strip() != "":
                    raw[field] = cell.strip()
            yield row_number, raw, None


def _iter_jsonl_rows(path: Path):
    with open(path, encoding="utf-8-sig") as handle:
        row_number = 0
        for line in handle:
            if not line.strip():
                continue
            row_number += 1
            try:
                payload = json.loads(line)
                if not isinstance(payload, dict):
                    raise ValueError("row is not a JSON object")
            except ValueError as exc:
                yield row_number, {}, f"invalid JSON: {exc}"
                continue
            yield row_number, payload, None


def _build_record(
    raw: Mapping[str, object],
    split: str,
    row_number: int,
    taxonomy: Optional[LabelTaxonomy],
) -> PublicationRecord:
    data = dict(raw)
    data.setdefault("split", split)
    data.setdefault("id", f"{split}:{row_number}")

    title = str(data.get("title") or "").strip()
    if not title:
        raise ValueError("missing title")

    label = data.get("label")
    if label is not None and taxonomy is not None and label not in taxonomy:
        raise ValueError(f"unknown label: {label!r}")

    doi = data.get("doi")
    if doi is not None:
        normalized = normalize_doi(str(doi))
        if normalized is None:
            # a malformed DOI is unusable as a lookup key; treat it like
            # an absent one instead of rejecting the whole row
            logger.warning("row %s: dropping malformed DOI %r", row_number, doi)
        data["doi"] = normalized

    for field in _INT_FIELDS:
        value = data.get(field)
        if value is None:
            continue
        try:
            data[field] = int(str(value))
        except ValueError:
            logger.warning("row %s: dropping non-integer %s %r", row_number, field, value)
            data[field] = None
    month = data.get("publication_month")
    if month is not None and not 1 <= int(month) <= 12:
        logger.warning("row %s: dropping out-of-range month %s", row_number, month)
        data["publication_month"] = None

    return record_from_json({k: v for k, v in data.items() if v is not None})


def compute_stats(
    records: Sequence[PublicationRecord],
    taxonomy: Optional[LabelTaxonomy] = None,
) -> DatasetStats:
    per_split: dict[str, int] = {}
    per_label: dict[str, int] = {}
    missing_doi: dict[str, int] = {}
    missing_abstract: dict[str, int] = {}
    group_counts: dict[str, int] = {}
    labeled = 0

    for record in records:
        per_split[record.split] = per_split.get(record.split, 0) + 1
        missing_doi.setdefault(record.split, 0)
        missing_abstract.setdefault(record.split, 0)
        if record.doi is None:
            missing_doi[record.split] += 1
        if not record.abstract.strip():
            missing_abstract[record.split] += 1
        if record.label is not None:
            labeled += 1
            per_label[record.label] = per_label.get(record.label, 0) + 1
            group = taxonomy.group(record.label) if taxonomy is not None else record.label
            group_counts[group] = group_counts.get(group, 0) + 1

    per_group = {g: c / labeled for g, c in group_counts.items()} if labeled else {}
    return DatasetStats(
        total=len(records),
        per_split=per_split,
        per_label=per_label,
        per_group=per_group,
        missing_doi=missing_doi,
        missing_abstract=missing_abstract,
    )


def stats_to_json(stats: DatasetStats) -> str:
    payload = {
        "total": stats.total,
        "per_split": dict(sorted(stats.per_split.items())),
        "per_label": dict(sorted(stats.per_label.items())),
        "per_group": dict(sorted(stats.per_group.items())),
        "missing_doi": dict(sorted(stats.missing_doi.items())),
        "missing_abstract": dict(sorted(stats.missing_abstract.items())),
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)


def render_stats_table(stats: DatasetStats) -> str:
    lines = [f"total records: {stats.total}", ""]
    lines.append(f"{'split':<12}  {'count':>8}  {'no DOI':>8}  {'no abstract':>12}")
    for split in sorted(stats.per_split):
        lines.append(
            f"{split:<12}  {stats.per_split[split]:>8}"
            f"  {stats.missing_doi.get(split, 0):>8}"
            f"  {stats.missing_abstract.get(split, 0):>12}"
        )
    if stats.per_group:
        lines.append("")
        width = max(len(g) for g in stats.per_group)
        lines.append(f"{'group':<{width}}  {'share':>8}")
        for group, share in sorted(stats.per_group.items(), key=lambda kv: -kv[1]):
            lines.append(f"{group:<{width}}  {share:>8.4f}")
    return "\n".join(lines)
