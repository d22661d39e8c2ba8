"""Shared domain types for the classification pipeline.

Every stage exchanges three kinds of values: publication records parsed
from the shared-task files, the closed label taxonomy, and per-record
enrichment bundles harvested from the bibliographic providers.  All types
are frozen dataclasses with tuple-valued collections so instances can be
shared freely across worker threads.

The canonical on-disk form is JSONL, one object per line, field names
matching the dataclass attributes, absent (None) fields omitted.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Sequence

logger = logging.getLogger(__name__)

SPLITS = ("train", "validation", "test")

#: Size of the full research-field taxonomy used by the shared task.
EXPECTED_LABEL_COUNT = 123

DOI_PATTERN = re.compile(r"^10\.[0-9]+(?:\.[0-9]+)*/\S+$")

_DOI_URL_PREFIXES = (
    "https://doi.org/",
    "http://doi.org/",
    "https://dx.doi.org/",
    "http://dx.doi.org/",
    "doi.org/",
    "doi:",
)


class DuplicateLabelError(ValueError):
    """A taxonomy file contains the same label twice."""

    def __init__(self, label: str, line_number: int):
        super().__init__(f"duplicate taxonomy label {label!r} (line {line_number})")
        self.label = label
        self.line_number = line_number


def normalize_doi(raw: Optional[str]) -> Optional[str]:
    """Normalize a DOI to the bare lowercase ``10.<registrant>/<suffix>`` form.

    Strips any resolver URL prefix and lowercases.  Returns None for empty
    input or for strings that do not look like a DOI after stripping; all
    three providers accept the bare form, so this is the single cache key
    per work.
    """
    if raw is None:
        return None
    doi = raw.strip()
    lowered = doi.lower()
    for prefix in _DOI_URL_PREFIXES:
        if lowered.startswith(prefix):
            doi = doi[len(prefix):]
            lowered = doi.lower()
    doi = doi.strip().lower()
    if not doi:
        return None
    if not DOI_PATTERN.match(doi):
        return None
    return doi


def dedup_preserving_order(items: Iterable[str]) -> tuple[str, ...]:
    """Drop duplicates, keeping the first occurrence of each item."""
    seen: set[str] = set()
    out: list[str] = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return tuple(out)


@dataclass(frozen=True)
class PublicationRecord:
    """One article's metadata row plus split membership.

    ``doi`` is stored normalized (lowercase, no resolver prefix); ``label``
    is absent for unlabeled test rows.
    """

    id: str
    title: str
    split: str
    abstract: str = ""
    author: str = ""
    doi: Optional[str] = None
    url: Optional[str] = None
    publication_month: Optional[int] = None
    publication_year: Optional[int] = None
    publisher: Optional[str] = None
    label: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.title:
            raise ValueError(f"record {self.id!r}: title must be non-empty")
        if self.split not in SPLITS:
            raise ValueError(f"record {self.id!r}: unknown split {self.split!r}")
        if self.doi is not None and not DOI_PATTERN.match(self.doi):
            raise ValueError(f"record {self.id!r}: malformed doi {self.doi!r}")
        if self.publication_month is not None and not 1 <= self.publication_month <= 12:
            raise ValueError(
                f"record {self.id!r}: publication_month {self.publication_month} out of range"
            )


@dataclass(frozen=True)
class LabelTaxonomy:
    """The closed set of research-field labels, optionally grouped.

    Lookup is case-sensitive and exact.  ``group_of`` maps a label to its
    top-level group (e.g. "Physical Sciences and Mathematics") when the
    taxonomy file carries a group column.
    """

    labels: tuple[str, ...]
    group_of: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("taxonomy labels must be unique")
        unknown = set(self.group_of) - set(self.labels)
        if unknown:
            raise ValueError(f"group mapping references unknown labels: {sorted(unknown)}")

    def __contains__(self, label: object) -> bool:
        return label in self._label_set

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def _label_set(self) -> frozenset:
        # cached lazily on first membership test
        cached = self.__dict__.get("_label_set_cache")
        if cached is None:
            cached = frozenset(self.labels)
            self.__dict__["_label_set_cache"] = cached
        return cached

    def group(self, label: str) -> str:
        """Top-level group for a label; the label itself when ungrouped."""
        return self.group_of.get(label, label)


def load_taxonomy(path: str | Path, strict: bool = False) -> LabelTaxonomy:
    """Read a taxonomy file: UTF-8 text, ``label[TAB]group`` one per line.

    The group column is optional.  Duplicate labels always raise
    DuplicateLabelError.  A label count other than 123 logs a warning so
    reduced desk-scale taxonomies stay usable; with ``strict=True`` the
    count mismatch raises instead.
    """
    path = Path(path)
    labels: list[str] = []
    seen: set[str] = set()
    group_of: dict[str, str] = {}
    with open(path, encoding="utf-8-sig") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            label, _, group = line.partition("\t")
            label = label.strip()
            group = group.strip()
            if label in seen:
                raise DuplicateLabelError(label, line_number)
            seen.add(label)
            labels.append(label)
            if group:
                group_of[label] = group
    if len(labels) != EXPECTED_LABEL_COUNT:
        message = (
            f"taxonomy {path} has {len(labels)} labels, expected {EXPECTED_LABEL_COUNT}"
        )
        if strict:
            raise ValueError(message)
        logger.warning(message)
    return LabelTaxonomy(labels=tuple(labels), group_of=group_of)


@dataclass(frozen=True)
class OpenAlexFields:
    """Enrichment fields extracted from an OpenAlex work object."""

    topics: tuple[str, ...] = ()
    subtopics: tuple[str, ...] = ()
    concepts: tuple[str, ...] = ()
    keywords: tuple[str, ...] = ()
    external_ids: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("topics", "subtopics", "concepts", "keywords"):
            object.__setattr__(self, name, dedup_preserving_order(getattr(self, name)))
        object.__setattr__(self, "external_ids", dict(self.external_ids))


@dataclass(frozen=True)
class S2agFields:
    """Enrichment fields extracted from an S2AG paper object."""

    fields_of_study: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "fields_of_study", dedup_preserving_order(self.fields_of_study))


@dataclass(frozen=True)
class CrossrefFields:
    """Enrichment fields extracted from a Crossref work message."""

    journal_title: Optional[str] = None
    subjects: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "subjects", dedup_preserving_order(self.subjects))


@dataclass(frozen=True)
class Provenance:
    """Where and when one provider's fields were fetched."""

    source: str  # live | cache | fixture
    fetched_at: Optional[str] = None  # ISO-8601, absent for timeless fixtures

    def __post_init__(self) -> None:
        if self.source not in ("live", "cache", "fixture"):
            raise ValueError(f"unknown provenance source {self.source!r}")


@dataclass(frozen=True)
class EnrichmentBundle:
    """Provenance-tagged fields harvested for one record.

    A provider sub-record is either wholly absent or present together with
    its provenance entry.  ``skipped`` marks records that had no DOI and so
    were never sent to the DOI-keyed providers.
    """

    record_id: str
    openalex: Optional[OpenAlexFields] = None
    s2ag: Optional[S2agFields] = None
    crossref: Optional[CrossrefFields] = None
    provenance: Mapping[str, Provenance] = field(default_factory=dict)
    skipped: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "provenance", dict(self.provenance))
        for provider in ("openalex", "s2ag", "crossref"):
            if getattr(self, provider) is not None and provider not in self.provenance:
                raise ValueError(
                    f"bundle {self.record_id!r}: provider {provider!r} present without provenance"
                )


# ---------------------------------------------------------------------------
# Canonical JSON (de)serialization
# ---------------------------------------------------------------------------

def record_to_json(record: PublicationRecord) -> dict:
    out: dict = {}
    for f in fields(PublicationRecord):
        value = getattr(record, f.name)
        if value is None:
            continue
        out[f.name] = value
    return out


def record_from_json(obj: Mapping) -> PublicationRecord:
    known = {f.name for f in fields(PublicationRecord)}
    kwargs = {k: v for k, v in obj.items() if k in known}
    return PublicationRecord(**kwargs)


def bundle_to_json(bundle: EnrichmentBundle) -> dict:
    out: dict = {"record_id": bundle.record_id}
    if bundle.openalex is not None:
        oa = bundle.openalex
        out["openalex"] = {
            "topics": list(oa.topics),
            "subtopics": list(oa.subtopics),
            "concepts": list(oa.concepts),
            "keywords": list(oa.keywords),
            "external_ids": dict(oa.external_ids),
        }
    if bundle.s2ag is not None:
        out["s2ag"] = {"fields_of_study": list(bundle.s2ag.fields_of_study)}
    if bundle.crossref is not None:
        cr: dict = {"subjects": list(bundle.crossref.subjects)}
        if bundle.crossref.journal_title is not None:
            cr["journal_title"] = bundle.crossref.journal_title
        out["crossref"] = cr
    if bundle.provenance:
        prov: dict = {}
        for provider in sorted(bundle.provenance):
            entry = bundle.provenance[provider]
            item: dict = {"source": entry.source}
            if entry.fetched_at is not None:
                item["fetched_at"] = entry.fetched_at
            prov[provider] = item
        out["provenance"] = prov
    if bundle.skipped:
        out["skipped"] = True
    return out


def bundle_from_json(obj: Mapping) -> EnrichmentBundle:
    openalex = None
    if "openalex" in obj:
        oa = obj["openalex"]
        openalex = OpenAlexFields(
            topics=tuple(oa.get("topics", ())),
            subtopics=tuple(oa.get("subtopics", ())),
            concepts=tuple(oa.get("concepts", ())),
            keywords=tuple(oa.get("keywords", ())),
            external_ids=dict(oa.get("external_ids", {})),
        )
    s2ag = None
    if "s2ag" in obj:
        s2ag = S2agFields(fields_of_study=tuple(obj["s2ag"].get("fields_of_study", ())))
    crossref = None
    if "crossref" in obj:
        cr = obj["crossref"]
        crossref = CrossrefFields(
            journal_title=cr.get("journal_title"),
            subjects=tuple(cr.get("subjects", ())),
        )
    provenance = {
        provider: Provenance(source=entry["source"], fetched_at=entry.get("fetched_at"))
        for provider, entry in obj.get("provenance", {}).items()
    }
    return EnrichmentBundle(
        record_id=obj["record_id"],
        openalex=openalex,
        s2ag=s2ag,
        crossref=crossref,
        provenance=provenance,
        skipped=bool(obj.get("skipped", False)),
    )


def dump_jsonl(objs: Iterable[Mapping], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for obj in objs:
            handle.write(json.dumps(obj, ensure_ascii=False))
            handle.write("\n")


def iter_jsonl(path: str | Path) -> Iterator[dict]:
    with open(path, encoding="utf-8-sig") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_records(records: Sequence[PublicationRecord], path: str | Path) -> None:
    dump_jsonl((record_to_json(r) for r in records), path)


def read_records(path: str | Path) -> list[PublicationRecord]:
    return [record_from_json(obj) for obj in iter_jsonl(path)]


def write_bundles(bundles: Sequence[EnrichmentBundle], path: str | Path) -> None:
    dump_jsonl((bundle_to_json(b) for b in bundles), path)


def read_bundles(path: str | Path) -> list[EnrichmentBundle]:
    return [bundle_from_json(obj) for obj in iter_jsonl(path)]
