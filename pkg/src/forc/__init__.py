"""Metadata enrichment and classification-input pipeline for scholarly records."""

# the assemble() and ingest() functions are deliberately not re-exported
# here: their names would shadow the submodules of the same name
from .assemble import (
    AssembledInput,
    AssemblyStats,
    SourceSet,
    assemble_all,
    parse_source_set,
)
from .ingest import DatasetStats, IngestResult, RowError, compute_stats
from .metrics import EvalReport, EvaluationError, evaluate
from .model import (
    EnrichmentBundle,
    LabelTaxonomy,
    PublicationRecord,
    load_taxonomy,
    normalize_doi,
)
from .normalize import normalize_title
from .providers import (
    FakeClock,
    ProviderClient,
    ProviderConfig,
    RateLimiter,
    ResponseCache,
    enrich_all,
)
from .resolve import ResolutionOutcome, resolve_all, resolve_doi
from .wordpiece import Vocabulary, count_tokens, load_vocabulary, tokenize

__version__ = "0.1.0"

__all__ = [
    "AssembledInput",
    "AssemblyStats",
    "DatasetStats",
    "EnrichmentBundle",
    "EvalReport",
    "EvaluationError",
    "FakeClock",
    "IngestResult",
    "LabelTaxonomy",
    "ProviderClient",
    "ProviderConfig",
    "PublicationRecord",
    "RateLimiter",
    "ResolutionOutcome",
    "ResponseCache",
    "RowError",
    "SourceSet",
    "Vocabulary",
    "assemble_all",
    "compute_stats",
    "count_tokens",
    "enrich_all",
    "evaluate",
    "load_taxonomy",
    "load_vocabulary",
    "normalize_doi",
    "normalize_title",
    "parse_source_set",
    "resolve_all",
    "resolve_doi",
    "tokenize",
    "__version__",
]
