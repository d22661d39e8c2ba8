"""Deterministic WordPiece tokenization over a fixed vocabulary.

The pipeline only needs token *counts* and truncation positions, but the
tokenizer reproduces the standard encoder preprocessing exactly (text
cleanup, punctuation splitting, optional lowercasing with accent
stripping, then greedy longest-match-first subword segmentation) so that
counts agree with what the downstream model will actually see.

Vocabulary file format: one token per line, line number = id.  Cased or
uncased behavior is a vocabulary property, read from a
``tokenizer_config.json`` sidecar next to the vocabulary file when
present.  Special tokens ([CLS], [SEP], [PAD], [UNK], and [MASK] when
present) are kept atomic wherever they occur in the text.
"""
from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

REQUIRED_SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]")


@dataclass(frozen=True)
class Vocabulary:
    """An ordered token list with dense ids and tokenizer settings."""

    tokens: tuple[str, ...]
    lowercase: bool = True
    strip_accents: Optional[bool] = None  # None: follow ``lowercase``
    unk_token: str = "[UNK]"
    continuation_prefix: str = "##"
    max_input_chars_per_word: int = 100
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {token: i for i, token in enumerate(self.tokens)}
        if len(index) != len(self.tokens):
            raise ValueError("vocabulary contains duplicate tokens")
        object.__setattr__(self, "index", index)
        missing = [t for t in REQUIRED_SPECIAL_TOKENS if t not in index]
        if missing:
            raise ValueError(f"vocabulary missing special tokens: {missing}")
        if self.unk_token not in index:
            raise ValueError(f"unk token {self.unk_token!r} not in vocabulary")

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: object) -> bool:
        return token in self.index

    @property
    def never_split(self) -> tuple[str, ...]:
        specials = list(REQUIRED_SPECIAL_TOKENS)
        if "[MASK]" in self.index:
            specials.append("[MASK]")
        return tuple(specials)

    def token_id(self, token: str) -> int:
        return self.index.get(token, self.index[self.unk_token])


def load_vocabulary(
    path: str | Path,
    lowercase: Optional[bool] = None,
    strip_accents: Optional[bool] = None,
) -> Vocabulary:
    """Load a one-token-per-line vocabulary file.

    ``lowercase`` defaults to the ``do_lower_case`` entry of a
    ``tokenizer_config.json`` next to the file, falling back to True (the
    common uncased setting).  An explicit argument always wins.
    """
    path = Path(path)
    tokens = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            tokens.append(line.rstrip("\n").rstrip("\r"))
    while tokens and tokens[-1] == "":
        tokens.pop()

    sidecar = path.parent / "tokenizer_config.json"
    if sidecar.exists():
        config = json.loads(sidecar.read_text(encoding="utf-8"))
        if lowercase is None:
            lowercase = config.get("do_lower_case")
        if strip_accents is None:
            strip_accents = config.get("strip_accents")
    if lowercase is None:
        lowercase = True
    return Vocabulary(tokens=tuple(tokens), lowercase=lowercase, strip_accents=strip_accents)


def tokenize(text: str, vocab: Vocabulary) -> list[str]:
    """Tokenize text into wordpieces; pure and deterministic."""
    tokens: list[str] = []
    for is_special, segment in _split_on_special(text, vocab.never_split):
        if is_special:
            tokens.append(segment)
            continue
        for word in _basic_tokenize(segment, vocab):
            tokens.extend(_wordpiece(word, vocab))
    return tokens


def count_tokens(text: str, vocab: Vocabulary) -> int:
    return len(tokenize(text, vocab))


def tokens_to_ids(tokens: Sequence[str], vocab: Vocabulary) -> list[int]:
    return [vocab.token_id(t) for t in tokens]


# ---------------------------------------------------------------------------
# Pipeline stages; these mirror the published encoder preprocessing so token
# counts agree exactly with a reference tokenizer for the same vocabulary.
# ---------------------------------------------------------------------------

def _split_on_special(text: str, specials: Sequence[str]) -> list[tuple[bool, str]]:
    """Split out special tokens wherever they occur (case-sensitive)."""
    if not specials:
        return [(False, text)]
    pattern = re.compile("|".join(re.escape(s) for s in sorted(specials, key=len, reverse=True)))
    segments: list[tuple[bool, str]] = []
    pos = 0
    for match in pattern.finditer(text):
        if match.start() > pos:
            segments.append((False, text[pos:match.start()]))
        segments.append((True, match.group(0)))
        pos = match.end()
    if pos < len(text):
        segments.append((False, text[pos:]))
    return segments


def _basic_tokenize(text: str, vocab: Vocabulary) -> list[str]:
    text = _clean_text(text)
    text = _pad_cjk(text)
    words: list[str] = []
    for word in text.split():
        if vocab.lowercase:
            word = word.lower()
            if vocab.strip_accents is not False:
                word = _strip_accents(word)
        elif vocab.strip_accents:
            word = _strip_accents(word)
        words.extend(_split_on_punctuation(word))
    return words


def _clean_text(text: str) -> str:
    out = []
    for ch in text:
        cp = ord(ch)
        if cp == 0 or cp == 0xFFFD or _is_control(ch):
            continue
        out.append(" " if _is_whitespace(ch) else ch)
    return "".join(out)


def _strip_accents(text: str) -> str:
    return "".join(
        ch for ch in unicodedata.normalize("NFD", text) if unicodedata.category(ch) != "Mn"
    )


def _split_on_punctuation(word: str) -> list[str]:
    out: list[str] = []
    start_new = True
    for ch in word:
        if _is_punctuation(ch):
            out.append(ch)
            start_new = True
        else:
            if start_new:
                out.append("")
            start_new = False
            out[-1] += ch
    return [w for w in out if w]


def _wordpiece(word: str, vocab: Vocabulary) -> list[str]:
    """Greedy longest-match-first segmentation of one basic token."""
    if len(word) > vocab.max_input_chars_per_word:
        return [vocab.unk_token]
    pieces: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        piece = None
        while start < end:
            candidate = word[start:end]
            if start > 0:
                candidate = vocab.continuation_prefix + candidate
            if candidate in vocab.index:
                piece = candidate
                break
            end -= 1
        if piece is None:
            return [vocab.unk_token]
        pieces.append(piece)
        start = end
    return pieces


def _is_whitespace(ch: str) -> bool:
    if ch in (" ", "\t", "\n", "\r"):
        return True
    return unicodedata.category(ch) == "Zs"


def _is_control(ch: str) -> bool:
    if ch in ("\t", "\n", "\r"):
        return False
    return unicodedata.category(ch).startswith("C")


def _is_punctuation(ch: str) -> bool:
    cp = ord(ch)
    # all non-letter/number ASCII counts as punctuation, matching the
    # encoder convention (so ^, $, ` split words even though Unicode does
    # not class them as punctuation)
    if 33 <= cp <= 47 or 58 <= cp <= 64 or 91 <= cp <= 96 or 123 <= cp <= 126:
        return True
    return unicodedata.category(ch).startswith("P")


def _pad_cjk(text: str) -> str:
    out = []
    for ch in text:
        if _is_cjk(ord(ch)):
            out.append(" ")
            out.append(ch)
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def _is_cjk(cp: int) -> bool:
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0x20000 <= cp <= 0x2A6DF
        or 0x2A700 <= cp <= 0x2B73F
        or 0x2B740 <= cp <= 0x2B81F
        or 0x2B820 <= cp <= 0x2CEAF
        or 0xF900 <= cp <= 0xFAFF
        or 0x2F800 <= cp <= 0x2FA1F
    )
