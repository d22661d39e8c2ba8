#!/usr/bin/env python3
"""Regenerate fixtures/vocab.txt from the committed fixture corpus.

The vocabulary is uncased, WordPiece-style: special tokens first, then
single characters (with their ## continuations), common suffix pieces,
and every whole word appearing in the fixture corpus, its enrichment
cache, and the input-builder's field prefixes.  Character fallbacks
keep ordinary ASCII words out of [UNK] so greedy longest-match-first
behavior is actually exercised.

Deterministic: rerunning writes byte-identical files.
"""
from __future__ import annotations

import csv
import json
import string
import sys
import unicodedata
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from forc import wordpiece

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]

SUFFIX_PIECES = [
    "##s", "##ed", "##ing", "##ion", "##tion", "##al", "##ly", "##er",
    "##es", "##ity", "##ies", "##ness", "##ment", "##able", "##ive",
]

EXTRA_WORDS = [
    # field prefixes rendered by the input builder
    "fields", "of", "study", "topics", "concepts", "categories",
    "journal", "title", "subjects",
    # connective vocabulary common in scholarly text
    "the", "a", "an", "and", "in", "on", "for", "with", "we", "to",
    "is", "are", "this", "that", "our", "new", "data", "model", "models",
    "analysis", "results", "using", "based", "applied", "multidisciplinary",
]


def harvest_text() -> list[str]:
    texts: list[str] = []
    with open(FIXTURES / "corpus.csv", encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            texts.extend([row["title"], row["abstract"], row["label"]])
    for body in sorted((FIXTURES / "cache").rglob("*.json")):
        if body.name.endswith(".meta.json"):
            continue
        try:
            payload = json.loads(body.read_text(encoding="utf-8"))
        except ValueError:
            continue
        texts.append(json.dumps(payload, ensure_ascii=False))
    with open(FIXTURES / "taxonomy.tsv", encoding="utf-8") as handle:
        texts.append(handle.read().replace("\t", " "))
    return texts


def words_from(texts: list[str]) -> set[str]:
    # reuse the tokenizer's own basic pass so vocabulary entries line up
    # with what tokenize() will look for
    probe = wordpiece.Vocabulary(
        tokens=tuple(SPECIALS), lowercase=True, unk_token="[UNK]"
    )
    words: set[str] = set()
    for text in texts:
        for word in wordpiece._basic_tokenize(text, probe):
            if word and len(word) <= 24:
                words.add(word)
    return words


def main() -> None:
    words = words_from(harvest_text())
    for extra in EXTRA_WORDS:
        words.add(extra)

    chars = sorted(set(string.ascii_lowercase + string.digits) | {
        ch for word in words for ch in word if not unicodedata.category(ch).startswith("C")
    })
    char_tokens = [c for c in chars if c not in SPECIALS]
    continuation = [f"##{c}" for c in char_tokens]

    seen = set(SPECIALS)
    ordered: list[str] = list(SPECIALS)
    for token in char_tokens + continuation + SUFFIX_PIECES + sorted(words):
        if token not in seen:
            seen.add(token)
            ordered.append(token)

    (FIXTURES / "vocab.txt").write_text("\n".join(ordered) + "\n", encoding="utf-8")
    (FIXTURES / "tokenizer_config.json").write_text(
        json.dumps({"do_lower_case": True}, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(ordered)} tokens "
          f"({len(char_tokens)} chars, {len(words)} words)")


if __name__ == "__main__":
    main()
