"""Classifier input assembly.

Builds one input string per record from the record itself plus its
enrichment bundle, in a fixed canonical field order:

    title, fields of study, topics, abstract, concepts, categories,
    journal title, subjects

Fields are joined by " [SEP] ".  Every field except title and abstract
is rendered as "<Field Name>: term1, term2".  "Categories" carries the
subtopic names of the work's topics (the taxonomy level between topic
and concept).  The total WordPiece count, including the 2 reserved
framing tokens the encoder adds around a single sequence, must stay
within the budget; over-budget inputs are cut down by trimming the
abstract's tail first, then dropping enrichment fields from last to
first, and only as a last resort trimming the title.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .model import EnrichmentBundle, PublicationRecord
from .wordpiece import Vocabulary, count_tokens

SEPARATOR = " [SEP] "
RESERVED_FRAMING_TOKENS = 2  # leading [CLS] + trailing [SEP]
MIN_BUDGET = 16
DEFAULT_BUDGET = 512

CANONICAL_FIELD_ORDER = (
    "title",
    "fields_of_study",
    "topics",
    "abstract",
    "concepts",
    "categories",
    "journal_title",
    "subjects",
)

_FIELD_PREFIXES = {
    "fields_of_study": "Fields of Study",
    "topics": "Topics",
    "concepts": "Concepts",
    "categories": "Categories",
    "journal_title": "Journal Title",
    "subjects": "Subjects",
}


@dataclass(frozen=True)
class SourceSet:
    """Which metadata sources contribute fields to the input."""

    include_core: bool = True  # title + abstract from the record itself
    include_s2ag: bool = False
    include_openalex: bool = False
    include_crossref: bool = False

    @property
    def name(self) -> str:
        parts = []
        if self.include_core:
            parts.append("ta")
        if self.include_s2ag:
            parts.append("s2ag")
        if self.include_openalex:
            parts.append("oa")
        if self.include_crossref:
            parts.append("cr")
        return "+".join(parts)


TA = SourceSet(include_core=True)
TA_S2AG_OA = SourceSet(include_core=True, include_s2ag=True, include_openalex=True)
TA_S2AG_OA_CR = SourceSet(
    include_core=True, include_s2ag=True, include_openalex=True, include_crossref=True
)


def parse_source_set(text: str) -> SourceSet:
    """Parse names like "ta", "ta+s2ag+oa", "ta+s2ag+oa+cr".

    Sets without "ta" (enrichment fields only) are a supported
    extension, used as the metadata-tower input of the dual-encoder
    setup.
    """
    known = {"ta", "s2ag", "oa", "cr"}
    tokens = [t.strip().lower() for t in text.split("+") if t.strip()]
    if not tokens:
        raise ValueError("empty source set")
    unknown = [t for t in tokens if t not in known]
    if unknown:
        raise ValueError(f"unknown source-set tokens {unknown}; expected from {sorted(known)}")
    return SourceSet(
        include_core="ta" in tokens,
        include_s2ag="s2ag" in tokens,
        include_openalex="oa" in tokens,
        include_crossref="cr" in tokens,
    )


@dataclass(frozen=True)
class AssembledInput:
    record_id: str
    text: str
    token_count: int
    truncated: bool
    label: Optional[str] = None
    field_spans: tuple[tuple[str, int, int], ...] = ()

    def __post_init__(self) -> None:
        order = {name: i for i, name in enumerate(CANONICAL_FIELD_ORDER)}
        indexes = [order[name] for name, _, _ in self.field_spans]
        if indexes != sorted(indexes):
            raise ValueError("field_spans out of canonical order")


@dataclass(frozen=True)
class AssemblyStats:
    total: int
    truncated: int
    missing_bundles: int
    mean_token_count: float

    @property
    def truncation_rate(self) -> float:
        return self.truncated / self.total if self.total else 0.0

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "truncated": self.truncated,
            "truncation_rate": self.truncation_rate,
            "missing_bundles": self.missing_bundles,
            "mean_token_count": self.mean_token_count,
        }


def _render_terms(name: str, terms: Sequence[str]) -> Optional[str]:
    terms = [t for t in terms if t and t.strip()]
    if not terms:
        return None
    return f"{_FIELD_PREFIXES[name]}: " + ", ".join(t.strip() for t in terms)


def _candidate_fields(
    record: PublicationRecord,
    bundle: Optional[EnrichmentBundle],
    source_set: SourceSet,
) -> list[tuple[str, str]]:
    """Present fields as (name, rendered text), already in canonical order."""
    openalex = bundle.openalex if bundle is not None and source_set.include_openalex else None
    s2ag = bundle.s2ag if bundle is not None and source_set.include_s2ag else None
    crossref = bundle.crossref if bundle is not None and source_set.include_crossref else None

    rendered: dict[str, Optional[str]] = {}
    if source_set.include_core:
        rendered["title"] = record.title.strip() or None
        rendered["abstract"] = record.abstract.strip() or None
    if s2ag is not None:
        rendered["fields_of_study"] = _render_terms("fields_of_study", s2ag.fields_of_study)
    if openalex is not None:
        rendered["topics"] = _render_terms("topics", openalex.topics)
        rendered["concepts"] = _render_terms("concepts", openalex.concepts)
        rendered["categories"] = _render_terms("categories", openalex.subtopics)
    if crossref is not None:
        if crossref.journal_title and crossref.journal_title.strip():
            rendered["journal_title"] = f"Journal Title: {crossref.journal_title.strip()}"
        rendered["subjects"] = _render_terms("subjects", crossref.subjects)

    return [
        (name, rendered[name])
        for name in CANONICAL_FIELD_ORDER
        if rendered.get(name) is not None
    ]


def assemble(
    record: PublicationRecord,
    bundle: Optional[EnrichmentBundle],
    source_set: SourceSet,
    vocab: Vocabulary,
    budget: int = DEFAULT_BUDGET,
) -> AssembledInput:
    """Build one classifier input; guaranteed to fit the token budget."""
    if budget < MIN_BUDGET:
        raise ValueError(f"budget must be at least {MIN_BUDGET}, got {budget}")
    if source_set.include_core and not record.title.strip():
        raise ValueError(f"record {record.id}: empty title")

    available = budget - RESERVED_FRAMING_TOKENS
    fields = _candidate_fields(record, bundle, source_set)
    costs = {name: count_tokens(text, vocab) for name, text in fields}

    def total_cost(current: Sequence[tuple[str, str]]) -> int:
        return sum(costs[name] for name, _ in current) + max(0, len(current) - 1)

    truncated = False
    if total_cost(fields) > available:
        truncated = True
        fields, costs = _trim_abstract(fields, costs, available, vocab)
        while total_cost(fields) > available and len(fields) > 1:
            dropped, _ = fields.pop()
            costs.pop(dropped)
        if total_cost(fields) > available:
            # only one field left (normally the title): last-resort trim
            name, text = fields[0]
            text = _trim_text(text, available, vocab)
            fields = [(name, text)]
            costs = {name: count_tokens(text, vocab)}

    text_parts = []
    spans = []
    offset = 0
    for i, (name, part) in enumerate(fields):
        if i > 0:
            offset += len(SEPARATOR)
        spans.append((name, offset, offset + len(part)))
        text_parts.append(part)
        offset += len(part)
    text = SEPARATOR.join(text_parts)

    token_count = count_tokens(text, vocab) + RESERVED_FRAMING_TOKENS
    if token_count > budget:
        raise AssertionError(
            f"record {record.id}: assembled input holds {token_count} tokens over budget {budget}"
        )
    return AssembledInput(
        record_id=record.id,
        text=text,
        token_count=token_count,
        truncated=truncated,
        label=record.label,
        field_spans=tuple(spans),
    )


def _trim_abstract(
    fields: list[tuple[str, str]],
    costs: dict[str, int],
    available: int,
    vocab: Vocabulary,
) -> tuple[list[tuple[str, str]], dict[str, int]]:
    index = next((i for i, (name, _) in enumerate(fields) if name == "abstract"), None)
    if index is None:
        return fields, costs
    others = [f for f in fields if f[0] != "abstract"]
    base = sum(costs[name] for name, _ in others) + max(0, len(others) - 1)
    allowed = available - base - (1 if others else 0)
    abstract = fields[index][1]
    trimmed = _trim_text(abstract, allowed, vocab) if allowed > 0 else ""
    costs = dict(costs)
    if trimmed:
        fields = list(fields)
        fields[index] = ("abstract", trimmed)
        costs["abstract"] = count_tokens(trimmed, vocab)
    else:
        fields = others
        costs.pop("abstract")
    return fields, costs


def _trim_text(text: str, allowed: int, vocab: Vocabulary) -> str:
    """Longest word-boundary prefix within the token allowance."""
    if allowed <= 0:
        return ""
    words = text.split()
    lo, hi = 0, len(words)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if count_tokens(" ".join(words[:mid]), vocab) <= allowed:
            lo = mid
        else:
            hi = mid - 1
    if lo > 0:
        return " ".join(words[:lo])
    # the very first word busts the allowance; fall back to a character
    # prefix (capped scan: going longer than 8 chars per allowed token
    # never helps with this vocabulary family)
    head = words[0] if words else ""
    for end in range(min(len(head), allowed * 8), 0, -1):
        if count_tokens(head[:end], vocab) <= allowed:
            return head[:end]
    return ""


def assemble_all(
    records: Sequence[PublicationRecord],
    bundles: Mapping[str, EnrichmentBundle],
    source_set: SourceSet,
    vocab: Vocabulary,
    budget: int = DEFAULT_BUDGET,
) -> tuple[list[AssembledInput], AssemblyStats]:
    """Assemble a batch in input order; a missing bundle means no enrichment."""
    outputs = []
    missing = 0
    for record in records:
        bundle = bundles.get(record.id)
        if bundle is None:
            missing += 1
        outputs.append(assemble(record, bundle, source_set, vocab, budget))
    mean = sum(o.token_count for o in outputs) / len(outputs) if outputs else 0.0
    stats = AssemblyStats(
        total=len(outputs),
        truncated=sum(1 for o in outputs if o.truncated),
        missing_bundles=missing,
        mean_token_count=mean,
    )
    return outputs, stats


def assembled_to_json(item: AssembledInput) -> dict:
    payload = {
        "id": item.record_id,
        "text": item.text,
        "token_count": item.token_count,
        "truncated": item.truncated,
    }
    if item.label is not None:
        payload["label"] = item.label
    return payload


def assembled_from_json(payload: Mapping) -> AssembledInput:
    return AssembledInput(
        record_id=str(payload["id"]),
        text=str(payload["text"]),
        token_count=int(payload["token_count"]),
        truncated=bool(payload["truncated"]),
        label=payload.get("label"),
    )


def write_assembled(path, items: Sequence[AssembledInput]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for item in items:
            handle.write(json.dumps(assembled_to_json(item), ensure_ascii=False) + "\n")


def read_assembled(path) -> list[AssembledInput]:
    items = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                items.append(assembled_from_json(json.loads(line)))
    return items
