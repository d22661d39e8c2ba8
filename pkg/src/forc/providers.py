"""HTTP clients for the three metadata providers.

One shared abstraction handles caching, rate limiting, retry with
geometric backoff, and offline modes; per-provider code is reduced to
URL construction and field extraction.

Modes:
  live        cache first, then HTTP; 200/404 responses are written back.
  cache_only  never touches the network; a cold key is a miss.
  fixture     cache_only against a committed fixture directory.

Time is injected through a small clock interface so rate-limit and
backoff behavior is testable without real sleeping.  In cache_only and
fixture modes the client holds no transport at all, so live requests
are structurally impossible.
"""
from __future__ import annotations

import hashlib
import json
import logging
import threading
import urllib.parse
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Optional, Protocol, Sequence

import requests

from .model import (
    CrossrefFields,
    EnrichmentBundle,
    OpenAlexFields,
    Provenance,
    PublicationRecord,
    S2agFields,
    normalize_doi,
)

logger = logging.getLogger(__name__)

MODES = ("live", "cache_only", "fixture")
_RETRYABLE_MIN_SERVER_ERROR = 500

S2AG_API_KEY_ENV = "FORC_S2AG_API_KEY"
CONTACT_EMAIL_ENV = "FORC_CONTACT_EMAIL"


# ---------------------------------------------------------------------------
# Clocks
# ---------------------------------------------------------------------------

class Clock(Protocol):
    def now(self) -> float: ...
    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        import time

        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        import time

        time.sleep(seconds)


class FakeClock:
    """Deterministic clock for tests; sleeping advances simulated time."""

    def __init__(self, start: float = 0.0) -> None:
        self._now = start
        self.sleeps: list[float] = []
        self._lock = threading.Lock()

    def now(self) -> float:
        with self._lock:
            return self._now

    def sleep(self, seconds: float) -> None:
        with self._lock:
            self.sleeps.append(seconds)
            self._now += seconds

    def advance(self, seconds: float) -> None:
        with self._lock:
            self._now += seconds


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


# ---------------------------------------------------------------------------
# Rate limiting
# ---------------------------------------------------------------------------

class RateLimiter:
    """Minimum-interval limiter: request starts are spaced 1/rps apart.

    With interval 1/rps, any half-open window of one second contains at
    most ceil(rps) request starts.
    """

    def __init__(self, requests_per_second: float, clock: Clock) -> None:
        if requests_per_second <= 0:
            raise ValueError("requests_per_second must be positive")
        self._interval = 1.0 / requests_per_second
        self._clock = clock
        self._lock = threading.Lock()
        self._next_free = float("-inf")

    def acquire(self) -> None:
        with self._lock:
            now = self._clock.now()
            start = max(now, self._next_free)
            self._next_free = start + self._interval
            wait = start - now
        if wait > 0:
            self._clock.sleep(wait)


# ---------------------------------------------------------------------------
# Response cache: cache/<provider>/<key>.json plus a .meta.json sidecar
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CacheEntry:
    key: str
    body: bytes
    status: int = 200
    fetched_at: Optional[str] = None


class ResponseCache:
    """Directory of raw response bodies; entries are immutable once written."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self._lock = threading.Lock()

    def _paths(self, provider: str, key: str) -> tuple[Path, Path]:
        body = self.root / provider / f"{key}.json"
        return body, body.with_suffix(".meta.json")

    def get(self, provider: str, key: str) -> Optional[CacheEntry]:
        body_path, meta_path = self._paths(provider, key)
        if not body_path.exists():
            return None
        body = body_path.read_bytes()
        status, fetched_at = 200, None
        if meta_path.exists():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
            status = int(meta.get("status", 200))
            fetched_at = meta.get("fetched_at")
        return CacheEntry(key=key, body=body, status=status, fetched_at=fetched_at)

    def put(
        self, provider: str, key: str, body: bytes, status: int, fetched_at: Optional[str]
    ) -> None:
        body_path, meta_path = self._paths(provider, key)
        with self._lock:
            if body_path.exists():
                return  # first write wins
            body_path.parent.mkdir(parents=True, exist_ok=True)
            body_path.write_bytes(body)
            meta_path.write_text(
                json.dumps({"status": status, "fetched_at": fetched_at}) + "\n",
                encoding="utf-8",
            )


def doi_cache_key(doi: str) -> str:
    # percent-encoding keeps keys reversible and filesystem-safe
    return urllib.parse.quote(doi, safe="")


def search_cache_key(query: str) -> str:
    return "search-" + hashlib.sha256(query.encode("utf-8")).hexdigest()[:40]


# ---------------------------------------------------------------------------
# Transports
# ---------------------------------------------------------------------------

class TransportError(RuntimeError):
    """Network-level failure (connection, timeout); retryable."""


class Transport(Protocol):
    def send(
        self, url: str, params: Optional[Mapping[str, str]], headers: Mapping[str, str]
    ) -> tuple[int, bytes]: ...


class RequestsTransport:
    def __init__(self, timeout: float = 30.0) -> None:
        self.timeout = timeout
        self._session = requests.Session()

    def send(
        self, url: str, params: Optional[Mapping[str, str]], headers: Mapping[str, str]
    ) -> tuple[int, bytes]:
        try:
            response = self._session.get(
                url, params=dict(params or {}), headers=dict(headers), timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        return response.status_code, response.content


class ScriptedTransport:
    """Test transport replaying queued responses and recording calls."""

    def __init__(self) -> None:
        self.calls: list[tuple[str, dict]] = []
        self._queues: dict[Optional[str], deque] = {}
        self._lock = threading.Lock()

    def enqueue(
        self, status: int, body: bytes | str | dict | list, url_contains: Optional[str] = None
    ) -> None:
        if isinstance(body, (dict, list)):
            body = json.dumps(body).encode("utf-8")
        elif isinstance(body, str):
            body = body.encode("utf-8")
        self._queues.setdefault(url_contains, deque()).append((status, body))

    def send(
        self, url: str, params: Optional[Mapping[str, str]], headers: Mapping[str, str]
    ) -> tuple[int, bytes]:
        with self._lock:
            self.calls.append((url, dict(params or {})))
            for needle, queue in self._queues.items():
                if needle is not None and needle in url and queue:
                    return queue.popleft()
            queue = self._queues.get(None)
            if queue:
                return queue.popleft()
        raise TransportError(f"no scripted response for {url}")


# ---------------------------------------------------------------------------
# Provider client
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProviderConfig:
    name: str
    base_url: str
    requests_per_second: float = 5.0
    max_retries: int = 2
    backoff_initial: float = 1.0
    backoff_multiplier: float = 2.0
    auth: Optional[str] = None
    auth_header: str = "x-api-key"
    contact: Optional[str] = None
    mode: str = "live"

    def __post_init__(self) -> None:
        if self.requests_per_second <= 0:
            raise ValueError("requests_per_second must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")
        if self.backoff_initial < 0 or self.backoff_multiplier <= 0:
            raise ValueError("backoff parameters must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class RawResponse:
    status: int
    body: bytes
    source: str  # live | cache | fixture
    fetched_at: Optional[str]


class FetchError(RuntimeError):
    """All retry attempts exhausted or request unrecoverable."""


class ProviderClient:
    """One provider's rate-limited, cached, retrying GET channel."""

    def __init__(
        self,
        config: ProviderConfig,
        cache: ResponseCache,
        transport: Optional[Transport] = None,
        clock: Optional[Clock] = None,
        wall_now: Callable[[], str] = _utc_now_iso,
    ) -> None:
        self.config = config
        self.cache = cache
        self.clock = clock or SystemClock()
        # offline modes hold no transport, so they cannot hit the network
        self.transport = (transport or RequestsTransport()) if config.mode == "live" else None
        self.limiter = RateLimiter(config.requests_per_second, self.clock)
        self.wall_now = wall_now
        self.live_requests = 0
        self._counter_lock = threading.Lock()

    def get(
        self, key: str, path: str, params: Optional[Mapping[str, str]] = None
    ) -> Optional[RawResponse]:
        """Fetch by cache key; None means an offline miss."""
        cached = self.cache.get(self.config.name, key)
        if cached is not None:
            source = "fixture" if self.config.mode == "fixture" else "cache"
            return RawResponse(cached.status, cached.body, source, cached.fetched_at)
        if self.config.mode != "live":
            return None
        return self._fetch_live(key, path, params)

    def _fetch_live(
        self, key: str, path: str, params: Optional[Mapping[str, str]]
    ) -> RawResponse:
        config = self.config
        url = config.base_url.rstrip("/") + "/" + path.lstrip("/")
        headers = {"User-Agent": _user_agent(config.contact)}
        if config.auth:
            headers[config.auth_header] = config.auth

        delay = config.backoff_initial
        last_failure = "no attempt made"
        for attempt in range(config.max_retries + 1):
            if attempt > 0:
                self.clock.sleep(delay)
                delay *= config.backoff_multiplier
            self.limiter.acquire()
            with self._counter_lock:
                self.live_requests += 1
            try:
                status, body = self.transport.send(url, params, headers)
            except TransportError as exc:
                last_failure = str(exc)
                logger.warning("%s: attempt %d failed: %s", config.name, attempt + 1, exc)
                continue
            if status == 429 or status >= _RETRYABLE_MIN_SERVER_ERROR:
                last_failure = f"HTTP {status}"
                logger.warning("%s: attempt %d got %s", config.name, attempt + 1, status)
                continue
            fetched_at = self.wall_now()
            if status in (200, 404):
                self.cache.put(config.name, key, body, status, fetched_at)
            return RawResponse(status, body, "live", fetched_at)
        raise FetchError(
            f"{config.name}: giving up after {config.max_retries + 1} attempts ({last_failure})"
        )


def _user_agent(contact: Optional[str]) -> str:
    base = "forc-pipeline/0.1"
    return f"{base} (mailto:{contact})" if contact else base


# ---------------------------------------------------------------------------
# Provider-specific fetch + extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FetchResult:
    provider: str
    status: str  # ok | not_found | miss | error
    fields: object = None
    provenance: Optional[Provenance] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class WorkHit:
    """One search result: title plus DOI when the work has one."""

    title: str
    doi: Optional[str]


def _mailto(client: ProviderClient) -> dict[str, str]:
    contact = client.config.contact
    return {"mailto": contact} if contact else {}


def _fetch(
    provider: str,
    client: ProviderClient,
    key: str,
    path: str,
    params: Optional[Mapping[str, str]],
    extract: Callable[[object], object],
) -> FetchResult:
    try:
        raw = client.get(key, path, params)
    except FetchError as exc:
        return FetchResult(provider, "error", error=str(exc))
    if raw is None:
        return FetchResult(provider, "miss", error=f"{provider}: no cached response for {key}")
    provenance = Provenance(source=raw.source, fetched_at=raw.fetched_at)
    if raw.status == 404:
        return FetchResult(provider, "not_found", provenance=provenance)
    if raw.status != 200:
        return FetchResult(provider, "error", error=f"{provider}: HTTP {raw.status}")
    try:
        payload = json.loads(raw.body)
    except ValueError as exc:
        return FetchResult(provider, "error", error=f"{provider}: malformed JSON body: {exc}")
    try:
        fields = extract(payload)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        return FetchResult(provider, "error", error=f"{provider}: unexpected payload shape: {exc}")
    return FetchResult(provider, "ok", fields=fields, provenance=provenance)


def _quoted(doi: str) -> str:
    return urllib.parse.quote(doi, safe="/:")


def fetch_openalex(doi: str, client: ProviderClient) -> FetchResult:
    return _fetch(
        "openalex",
        client,
        key=doi_cache_key(doi),
        path=f"works/doi:{_quoted(doi)}",
        params=_mailto(client),
        extract=extract_openalex,
    )


def fetch_s2ag(doi: str, client: ProviderClient) -> FetchResult:
    return _fetch(
        "s2ag",
        client,
        key=doi_cache_key(doi),
        path=f"graph/v1/paper/DOI:{_quoted(doi)}",
        params={"fields": "title,fieldsOfStudy,s2FieldsOfStudy,externalIds"},
        extract=extract_s2ag,
    )


def fetch_crossref(doi: str, client: ProviderClient) -> FetchResult:
    return _fetch(
        "crossref",
        client,
        key=doi_cache_key(doi),
        path=f"works/{_quoted(doi)}",
        params=_mailto(client),
        extract=extract_crossref,
    )


def fetch_openalex_search(query: str, client: ProviderClient) -> FetchResult:
    return _fetch(
        "openalex",
        client,
        key=search_cache_key(query),
        path="works",
        params={"filter": f"title.search:{query}", "per-page": "5", **_mailto(client)},
        extract=extract_search_hits,
    )


def extract_openalex(payload: dict) -> OpenAlexFields:
    topics = []
    subtopics = []
    for topic in payload.get("topics") or []:
        name = topic.get("display_name")
        if name:
            topics.append(name)
        subfield = (topic.get("subfield") or {}).get("display_name")
        if subfield:
            subtopics.append(subfield)
    concepts = [
        c["display_name"] for c in payload.get("concepts") or [] if c.get("display_name")
    ]
    keywords = [
        k.get("display_name") or k.get("keyword")
        for k in payload.get("keywords") or []
        if k.get("display_name") or k.get("keyword")
    ]
    ids = payload.get("ids") or {}
    return OpenAlexFields(
        topics=tuple(topics),
        subtopics=tuple(subtopics),
        concepts=tuple(concepts),
        keywords=tuple(keywords),
        external_ids={str(k): str(v) for k, v in ids.items()},
    )


def extract_s2ag(payload: dict) -> S2agFields:
    names = payload.get("fieldsOfStudy")
    if not names:
        names = [
            entry.get("category")
            for entry in payload.get("s2FieldsOfStudy") or []
            if entry.get("category")
        ]
    return S2agFields(fields_of_study=tuple(str(n) for n in names or []))


def extract_crossref(payload: dict) -> CrossrefFields:
    message = payload.get("message", payload)
    containers = message.get("container-title") or []
    journal = str(containers[0]) if containers else None
    subjects = tuple(str(s) for s in message.get("subject") or [])
    return CrossrefFields(journal_title=journal, subjects=subjects)


def extract_search_hits(payload: dict) -> tuple[WorkHit, ...]:
    hits = []
    for work in payload.get("results") or []:
        title = work.get("title") or work.get("display_name")
        if not title:
            continue
        doi = normalize_doi(str(work.get("doi") or "")) if work.get("doi") else None
        hits.append(WorkHit(title=str(title), doi=doi))
    return tuple(hits)


# ---------------------------------------------------------------------------
# Batch enrichment
# ---------------------------------------------------------------------------

_FETCHERS: Mapping[str, Callable[[str, ProviderClient], FetchResult]] = {
    "openalex": fetch_openalex,
    "s2ag": fetch_s2ag,
    "crossref": fetch_crossref,
}

DEFAULT_BASE_URLS = {
    "openalex": "https://api.openalex.org",
    "s2ag": "https://api.semanticscholar.org",
    "crossref": "https://api.crossref.org",
}


@dataclass
class EnrichmentSummary:
    records: int = 0
    skipped: int = 0
    per_provider: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    def count(self, provider: str, status: str) -> None:
        bucket = self.per_provider.setdefault(provider, {})
        bucket[status] = bucket.get(status, 0) + 1

    def as_dict(self) -> dict:
        return {
            "records": self.records,
            "skipped": self.skipped,
            "per_provider": {
                p: dict(sorted(counts.items()))
                for p, counts in sorted(self.per_provider.items())
            },
            "errors": [
                {"record_id": r, "provider": p, "error": e} for r, p, e in self.errors
            ],
        }


def enrich_record(
    record: PublicationRecord, clients: Mapping[str, ProviderClient]
) -> tuple[EnrichmentBundle, list[tuple[str, str, str]]]:
    """Fetch all configured providers for one record."""
    if record.doi is None:
        return EnrichmentBundle(record_id=record.id, skipped=True), []

    results: dict[str, FetchResult] = {}
    for provider, fetcher in _FETCHERS.items():
        if provider in clients:
            results[provider] = fetcher(record.doi, clients[provider])

    provenance = {
        p: r.provenance for p, r in results.items() if r.provenance is not None
    }
    errors = [
        (record.id, p, r.error) for p, r in results.items() if r.status in ("error", "miss")
    ]

    def fields_of(provider: str):
        result = results.get(provider)
        return result.fields if result is not None and result.status == "ok" else None

    bundle = EnrichmentBundle(
        record_id=record.id,
        openalex=fields_of("openalex"),
        s2ag=fields_of("s2ag"),
        crossref=fields_of("crossref"),
        provenance=provenance,
    )
    return bundle, errors


def enrich_all(
    records: Sequence[PublicationRecord],
    clients: Mapping[str, ProviderClient],
    concurrency: int = 4,
) -> tuple[list[EnrichmentBundle], EnrichmentSummary]:
    """Enrich a batch; output order equals input order, batch never aborts."""
    if concurrency < 1:
        raise ValueError("concurrency must be at least 1")
    summary = EnrichmentSummary(records=len(records))

    def work(record: PublicationRecord):
        return enrich_record(record, clients)

    if concurrency == 1 or len(records) <= 1:
        outcomes = [work(r) for r in records]
    else:
        with ThreadPoolExecutor(max_workers=concurrency) as pool:
            outcomes = list(pool.map(work, records))

    bundles = []
    for record, (bundle, errors) in zip(records, outcomes):
        bundles.append(bundle)
        if bundle.skipped:
            summary.skipped += 1
            for provider in clients:
                summary.count(provider, "skipped")
        else:
            for provider, status in _statuses_for(bundle, clients, errors).items():
                summary.count(provider, status)
        summary.errors.extend(errors)
    return bundles, summary


def _statuses_for(bundle, clients, errors) -> dict[str, str]:
    failed = {p: msg for _, p, msg in errors}
    statuses = {}
    for provider in clients:
        if getattr(bundle, provider) is not None:
            statuses[provider] = "ok"
        elif provider in failed:
            statuses[provider] = "miss" if "no cached response" in failed[provider] else "error"
        else:
            statuses[provider] = "not_found"
    return statuses


def make_clients(
    cache_dir: str | Path,
    mode: str,
    contact: Optional[str] = None,
    s2ag_api_key: Optional[str] = None,
    requests_per_second: Optional[Mapping[str, float]] = None,
    transport: Optional[Transport] = None,
    clock: Optional[Clock] = None,
) -> dict[str, ProviderClient]:
    """Build the standard three clients sharing one cache directory."""
    cache = ResponseCache(cache_dir)
    rps = dict(requests_per_second or {})
    clients = {}
    for name, base_url in DEFAULT_BASE_URLS.items():
        config = ProviderConfig(
            name=name,
            base_url=base_url,
            requests_per_second=rps.get(name, 5.0),
            auth=s2ag_api_key if name == "s2ag" else None,
            contact=contact,
            mode=mode,
        )
        clients[name] = ProviderClient(config, cache, transport=transport, clock=clock)
    return clients
