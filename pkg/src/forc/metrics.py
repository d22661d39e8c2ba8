"""Classification evaluation: accuracy and support-weighted P/R/F1.

Per-class precision, recall, and F1 use the 0-on-zero-division
convention.  Weighted aggregates weight each class by its gold support,
which makes weighted recall equal accuracy by construction; the report
carries both anyway because downstream tables show both.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Optional

from .model import LabelTaxonomy


class EvaluationError(ValueError):
    """Raised when gold/prediction inputs violate the evaluation contract."""


@dataclass(frozen=True)
class ClassMetrics:
    support: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    n_items: int
    accuracy: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    per_class: Mapping[str, ClassMetrics]
    confusion: Mapping[tuple[str, str], int]


def evaluate(
    gold: Mapping[str, str],
    predicted: Mapping[str, str],
    taxonomy: Optional[LabelTaxonomy] = None,
) -> EvalReport:
    """Score predictions against gold labels keyed by record id.

    Every gold id must be predicted; extra predictions are ignored.  When
    a taxonomy is given, every label on either side must belong to it.
    """
    if not gold:
        raise EvaluationError("gold set is empty")
    missing = sorted(set(gold) - set(predicted))
    if missing:
        shown = ", ".join(missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise EvaluationError(f"predictions missing for gold ids: {shown}{more}")
    if taxonomy is not None:
        bad = sorted(
            {label for label in gold.values() if label not in taxonomy}
            | {predicted[i] for i in gold if predicted[i] not in taxonomy}
        )
        if bad:
            raise EvaluationError(f"labels outside taxonomy: {bad[:5]}")

    confusion = Counter((gold[i], predicted[i]) for i in gold)
    n = len(gold)
    correct = sum(count for (g, p), count in confusion.items() if g == p)
    accuracy = correct / n

    labels = sorted({g for g, _ in confusion} | {p for _, p in confusion})
    per_class: dict[str, ClassMetrics] = {}
    for label in labels:
        tp = confusion.get((label, label), 0)
        pred_total = sum(c for (g, p), c in confusion.items() if p == label)
        gold_total = sum(c for (g, p), c in confusion.items() if g == label)
        precision = tp / pred_total if pred_total else 0.0
        recall = tp / gold_total if gold_total else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassMetrics(
            support=gold_total, precision=precision, recall=recall, f1=f1
        )

    def weighted(attr: str) -> float:
        return sum(m.support * getattr(m, attr) for m in per_class.values()) / n

    return EvalReport(
        n_items=n,
        accuracy=accuracy,
        weighted_precision=weighted("precision"),
        weighted_recall=weighted("recall"),
        weighted_f1=weighted("f1"),
        per_class=per_class,
        confusion=dict(confusion),
    )


def report_to_json(report: EvalReport) -> str:
    payload = {
        "n_items": report.n_items,
        "accuracy": report.accuracy,
        "weighted_precision": report.weighted_precision,
        "weighted_recall": report.weighted_recall,
        "weighted_f1": report.weighted_f1,
        "per_class": {
            label: {
                "support": m.support,
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
            }
            for label, m in sorted(report.per_class.items())
        },
        "confusion": [
            {"gold": g, "predicted": p, "count": c}
            for (g, p), c in sorted(report.confusion.items())
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False)


def render_table(report: EvalReport, per_class: bool = False) -> str:
    """Render a fixed-width summary table, optionally with per-class rows."""
    lines = [
        f"{'N':>8}  {'Acc':>8}  {'Prec':>8}  {'Rec':>8}  {'F1':>8}",
        f"{report.n_items:>8}  {report.accuracy:>8.4f}  {report.weighted_precision:>8.4f}"
        f"  {report.weighted_recall:>8.4f}  {report.weighted_f1:>8.4f}",
    ]
    if per_class:
        width = max(len(label) for label in report.per_class)
        lines.append("")
        lines.append(f"{'label':<{width}}  {'support':>8}  {'Prec':>8}  {'Rec':>8}  {'F1':>8}")
        for label, m in sorted(report.per_class.items()):
            lines.append(
                f"{label:<{width}}  {m.support:>8}  {m.precision:>8.4f}"
                f"  {m.recall:>8.4f}  {m.f1:>8.4f}"
            )
    return "\n".join(lines)
