import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from forc.wordpiece import (
    Vocabulary,
    count_tokens,
    load_vocabulary,
    tokenize,
    tokens_to_ids,
)


class TestVocabulary:
    def test_dense_ids(self, toy_vocab):
        assert toy_vocab.token_id("[PAD]") == 0
        assert toy_vocab.token_id("ab") == toy_vocab.tokens.index("ab")
        assert toy_vocab.token_id("zzz") == toy_vocab.token_id("[UNK]")

    def test_missing_special_token_rejected(self):
        with pytest.raises(ValueError, match="special"):
            Vocabulary(tokens=("[PAD]", "[UNK]", "[CLS]", "a"))

    def test_duplicate_tokens_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Vocabulary(tokens=("[PAD]", "[UNK]", "[CLS]", "[SEP]", "a", "a"))

    def test_load_with_sidecar_config(self, tmp_path):
        (tmp_path / "vocab.txt").write_text(
            "[PAD]\n[UNK]\n[CLS]\n[SEP]\nA\n", encoding="utf-8"
        )
        (tmp_path / "tokenizer_config.json").write_text(
            json.dumps({"do_lower_case": False}), encoding="utf-8"
        )
        vocab = load_vocabulary(tmp_path / "vocab.txt")
        assert vocab.lowercase is False
        assert tokenize("A", vocab) == ["A"]
        # explicit argument beats the sidecar
        assert load_vocabulary(tmp_path / "vocab.txt", lowercase=True).lowercase is True

    def test_load_defaults_to_uncased(self, tmp_path):
        (tmp_path / "vocab.txt").write_text(
            "[PAD]\n[UNK]\n[CLS]\n[SEP]\na\n", encoding="utf-8"
        )
        vocab = load_vocabulary(tmp_path / "vocab.txt")
        assert vocab.lowercase is True
        assert tokenize("A", vocab) == ["a"]


class TestTokenize:
    def test_empty(self, toy_vocab):
        assert tokenize("", toy_vocab) == []
        assert count_tokens("", toy_vocab) == 0

    def test_greedy_longest_match_first(self, toy_vocab):
        # "a" and "ab" both match; greedy takes "ab", then "##cd" over "##c"
        assert tokenize("abcd", toy_vocab) == ["ab", "##cd"]

    def test_unknown_character_word(self, toy_vocab):
        assert tokenize(chr(0x3B6), toy_vocab) == ["[UNK]"]

    def test_two_words(self, toy_vocab):
        assert tokenize("abcd abcd", toy_vocab) == ["ab", "##cd", "ab", "##cd"]
        assert count_tokens("abcd abcd", toy_vocab) == 4

    def test_no_continuation_match_is_unk(self, toy_vocab):
        # "ax": "a" matches, then "##x" missing -> the whole word is [UNK]
        assert tokenize("ax", toy_vocab) == ["[UNK]"]

    def test_long_word_is_unk(self, toy_vocab):
        word = "a" * (toy_vocab.max_input_chars_per_word + 1)
        assert tokenize(word, toy_vocab) == ["[UNK]"]

    def test_special_tokens_kept_atomic_anywhere(self, toy_vocab):
        assert tokenize("a[SEP]x", toy_vocab) == ["a", "[SEP]", "x"]
        assert tokenize("[CLS] ab [SEP]", toy_vocab) == ["[CLS]", "ab", "[SEP]"]
        # lowercase variant is not a special token and hits punctuation splits
        assert "[SEP]" not in tokenize("a[sep]x", toy_vocab)

    def test_whitespace_and_control_cleanup(self, toy_vocab):
        assert tokenize("a\tab\n x", toy_vocab) == ["a", "ab", "x"]
        # zero-width and NUL characters vanish entirely instead of splitting
        assert tokenize("a" + chr(0x200B) + "b", toy_vocab) == ["ab"]
        assert tokenize("a" + chr(0) + "b", toy_vocab) == ["ab"]

    def test_accents_stripped_when_uncased(self, fixture_vocab):
        assert tokenize("caf" + chr(0xE9), fixture_vocab) == tokenize("cafe", fixture_vocab)

    def test_ids_round_trip(self, toy_vocab):
        tokens = tokenize("abcd x", toy_vocab)
        ids = tokens_to_ids(tokens, toy_vocab)
        assert [toy_vocab.tokens[i] for i in ids] == tokens


class TestProperties:
    @given(st.text(max_size=60))
    def test_deterministic(self, text, fixture_vocab=None):
        pass  # replaced below; hypothesis needs fixtures injected differently

    def test_determinism_on_corpus(self, fixture_vocab):
        texts = ["Emergent Superconductivity", "caf" + chr(0xE9), "a[SEP]b", ""]
        for text in texts:
            assert tokenize(text, fixture_vocab) == tokenize(text, fixture_vocab)

    @given(
        st.lists(
            st.from_regex(r"[a-z]{1,6}", fullmatch=True), min_size=1, max_size=5
        ),
        st.lists(
            st.from_regex(r"[a-z]{1,6}", fullmatch=True), min_size=1, max_size=5
        ),
    )
    def test_concatenation_monotonicity(self, left, right):
        vocab = Vocabulary(
            tokens=("[PAD]", "[UNK]", "[CLS]", "[SEP]", "a", "b", "##a", "##b"),
            lowercase=True,
        )
        a, b = " ".join(left), " ".join(right)
        assert count_tokens(a + " " + b, vocab) == count_tokens(a, vocab) + count_tokens(
            b, vocab
        )
