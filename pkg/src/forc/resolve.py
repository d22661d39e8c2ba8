"""DOI resolution: fill missing DOIs via title search.

An existing DOI is never overwritten.  For records without one, the
cleaned title is sent to the work-search endpoint and the top hit is
accepted only when its title is a near-exact match (normalized edit
distance similarity at or above the threshold).  A strict threshold
keeps wrong works out of the enrichment stage, which would be worse
than a missing DOI.
"""
from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import PublicationRecord
from .normalize import normalize_title
from .providers import FetchResult, ProviderClient, WorkHit, fetch_openalex_search

DEFAULT_SIMILARITY_THRESHOLD = 0.95

STATUSES = ("already_had_doi", "resolved", "unresolved", "error")


@dataclass(frozen=True)
class ResolutionOutcome:
    record_id: str
    status: str
    doi: Optional[str] = None
    match_score: Optional[float] = None
    source: Optional[str] = None  # live | cache | fixture
    error: Optional[str] = None

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if (self.doi is not None) != (self.status == "resolved"):
            raise ValueError("doi must be present exactly when status is resolved")


@dataclass
class ResolutionSummary:
    per_status: dict = field(default_factory=dict)
    per_split: dict = field(default_factory=dict)

    def count(self, split: str, status: str) -> None:
        self.per_status[status] = self.per_status.get(status, 0) + 1
        bucket = self.per_split.setdefault(split, {})
        bucket[status] = bucket.get(status, 0) + 1

    def as_dict(self) -> dict:
        return {
            "per_status": dict(sorted(self.per_status.items())),
            "per_split": {
                split: dict(sorted(counts.items()))
                for split, counts in sorted(self.per_split.items())
            },
        }


def similarity(a: str, b: str) -> float:
    """Normalized edit-distance similarity in [0, 1] after case folding."""
    a = " ".join(a.casefold().split())
    b = " ".join(b.casefold().split())
    if not a and not b:
        return 1.0
    longest = max(len(a), len(b))
    return 1.0 - _levenshtein(a, b) / longest


def _levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        current = [i]
        for j, ch_b in enumerate(b, start=1):
            cost = 0 if ch_a == ch_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def resolve_doi(
    record: PublicationRecord,
    client: ProviderClient,
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
) -> ResolutionOutcome:
    if record.doi is not None:
        return ResolutionOutcome(record_id=record.id, status="already_had_doi")

    query = normalize_title(record.title)
    result: FetchResult = fetch_openalex_search(query, client)
    if result.status in ("error", "miss"):
        return ResolutionOutcome(record_id=record.id, status="error", error=result.error)
    if result.status == "not_found":
        return ResolutionOutcome(
            record_id=record.id, status="unresolved", source=result.provenance.source
        )

    hits: tuple[WorkHit, ...] = result.fields
    source = result.provenance.source
    if not hits:
        return ResolutionOutcome(record_id=record.id, status="unresolved", source=source)

    top = hits[0]
    score = similarity(query, top.title)
    if score >= threshold and top.doi is not None:
        return ResolutionOutcome(
            record_id=record.id,
            status="resolved",
            doi=top.doi,
            match_score=score,
            source=source,
        )
    return ResolutionOutcome(
        record_id=record.id, status="unresolved", match_score=score, source=source
    )


def resolve_all(
    records: Sequence[PublicationRecord],
    client: ProviderClient,
    concurrency: int = 4,
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
) -> tuple[list[ResolutionOutcome], ResolutionSummary]:
    """Resolve a batch; outcomes come back in input order."""
    if concurrency < 1:
        raise ValueError("concurrency must be at least 1")

    def work(record: PublicationRecord) -> ResolutionOutcome:
        return resolve_doi(record, client, threshold)

    if concurrency == 1 or len(records) <= 1:
        outcomes = [work(r) for r in records]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            outcomes = list(pool.map(work, records))

    summary = ResolutionSummary()
    for record, outcome in zip(records, outcomes):
        summary.count(record.split, outcome.status)
    return outcomes, summary


def apply_outcomes(
    records: Sequence[PublicationRecord], outcomes: Sequence[ResolutionOutcome]
) -> list[PublicationRecord]:
    """Return records with resolved DOIs filled in; everything else intact."""
    by_id = {o.record_id: o for o in outcomes}
    updated = []
    for record in records:
        outcome = by_id.get(record.id)
        if outcome is not None and outcome.status == "resolved" and record.doi is None:
            updated.append(dataclasses.replace(record, doi=outcome.doi))
        else:
            updated.append(record)
    return updated


def outcome_to_json(outcome: ResolutionOutcome) -> dict:
    payload = {"record_id": outcome.record_id, "status": outcome.status}
    for key in ("doi", "match_score", "source", "error"):
        value = getattr(outcome, key)
        if value is not None:
            payload[key] = value
    return payload


def write_outcomes(path, outcomes: Sequence[ResolutionOutcome]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for outcome in outcomes:
            handle.write(json.dumps(outcome_to_json(outcome), ensure_ascii=False) + "\n")
