"""Title cleaning for DOI search queries.

Raw shared-task titles carry line breaks, tabs, non-breaking spaces, and
LaTeX markup, all of which hurt title-search recall.  The cleaning rules,
applied in order:

1. every Unicode whitespace or control character becomes a single space;
2. ``$`` math delimiters are stripped; a backslash command keeps its
   command word (``\\alpha`` -> "alpha") unless the command is a pure
   formatting directive from the stop-list, which is dropped (the braced
   argument text of ``\\textit{...}`` and friends survives on its own);
3. ``{`` and ``}`` are deleted;
4. space runs collapse and the ends are trimmed.

``normalize_title`` is total and idempotent; no full LaTeX grammar is
attempted.
"""
from __future__ import annotations

import re
import unicodedata

# Formatting commands whose name carries no searchable signal.
_STOPLIST = frozenset({"it", "bf", "rm", "textit", "textbf", "emph"})

_COMMAND_RE = re.compile(r"\\([a-zA-Z]+)")

_FORBIDDEN = frozenset("\n\t\r{}$\\")


def normalize_title(raw: str) -> str:
    """Clean a title so it is usable as a provider search query."""
    out = []
    for ch in raw:
        if ch.isspace() or unicodedata.category(ch) in ("Cc", "Cf"):
            out.append(" ")
        else:
            out.append(ch)
    text = "".join(out)

    text = text.replace("$", "")
    text = _COMMAND_RE.sub(_replace_command, text)
    text = text.replace("\\", "")
    text = text.replace("{", "").replace("}", "")

    return " ".join(text.split())


def _replace_command(match: re.Match) -> str:
    word = match.group(1)
    return "" if word in _STOPLIST else word


def contains_forbidden_characters(text: str) -> bool:
    """True when text still carries characters normalize_title must remove."""
    return any(ch in _FORBIDDEN for ch in text)
