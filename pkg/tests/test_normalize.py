import pytest
from hypothesis import given
from hypothesis import strategies as st

from forc.normalize import contains_forbidden_characters, normalize_title

FORBIDDEN = set("\n\t\r{}$") | {chr(92)}  # backslash


class TestExamples:
    def test_whitespace_rules(self):
        raw = "Deep\nLearning\tfor" + chr(0xA0) + " Proteins"
        assert normalize_title(raw) == "Deep Learning for Proteins"

    def test_latex_rules(self):
        raw = r"On $\alpha$-decay of {Heavy} Nuclei"
        assert normalize_title(raw) == "On alpha-decay of Heavy Nuclei"

    def test_identity_on_clean_input(self):
        assert normalize_title("A clean title") == "A clean title"

    def test_stop_list_commands_dropped(self):
        assert normalize_title(r"a \textbf{bold} claim") == "a bold claim"
        assert normalize_title(r"{\it emphasized} text") == "emphasized text"

    def test_non_stop_list_command_keeps_word(self):
        assert normalize_title(r"$\beta$-ensembles") == "beta-ensembles"
        assert normalize_title(r"\gamma ray bursts") == "gamma ray bursts"

    def test_control_characters_removed(self):
        assert normalize_title("a" + chr(0) + "b" + chr(0x7F) + "c") == "a b c"

    def test_empty(self):
        assert normalize_title("") == ""
        assert normalize_title("   \t\n ") == ""


# strategy mixing plain words, LaTeX fragments, control and exotic whitespace
_fragments = st.sampled_from(
    [
        "word", "Deep", "alpha", "123", "-", " ", "  ", "\t", "\n", "\r",
        chr(0xA0), chr(0x2028), chr(0x3000), chr(0), chr(1), chr(0x9C),
        "$", "{", "}", chr(92) + "alpha", chr(92) + "textbf{x}",
        chr(92) + "it", "$x_i$", "{grouped}", chr(92) + chr(92), "caf" + chr(0xE9),
    ]
)
_titles = st.lists(_fragments, max_size=12).map("".join)


class TestProperties:
    @given(_titles)
    def test_idempotent(self, raw):
        once = normalize_title(raw)
        assert normalize_title(once) == once

    @given(_titles)
    def test_no_forbidden_characters(self, raw):
        cleaned = normalize_title(raw)
        assert not (set(cleaned) & FORBIDDEN)
        assert not contains_forbidden_characters(cleaned)

    @given(_titles)
    def test_no_double_spaces_or_outer_whitespace(self, raw):
        cleaned = normalize_title(raw)
        assert cleaned == cleaned.strip()
        assert "  " not in cleaned

    @given(st.lists(st.from_regex(r"[A-Za-z0-9]{1,8}", fullmatch=True), max_size=8))
    def test_plain_words_survive_in_order(self, words):
        raw = " ".join(words)
        assert normalize_title(raw) == raw

    @given(_titles)
    def test_arbitrary_unicode_never_raises(self, raw):
        normalize_title(raw)


@pytest.mark.parametrize(
    "text,expected",
    [("ok", False), ("a{b", True), ("a$b", True), ("a\tb", True)],
)
def test_contains_forbidden_characters(text, expected):
    assert contains_forbidden_characters(text) is expected
