from pathlib import Path

import pytest

from forc.model import PublicationRecord, load_taxonomy
from forc.wordpiece import Vocabulary, load_vocabulary

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_vocab() -> Vocabulary:
    return load_vocabulary(FIXTURES / "vocab.txt")


@pytest.fixture(scope="session")
def taxonomy():
    return load_taxonomy(FIXTURES / "taxonomy.tsv")


@pytest.fixture
def toy_vocab() -> Vocabulary:
    # the toy vocabulary from the greedy hand-trace: "abcd" -> ab + ##cd
    tokens = (
        "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
        "a", "ab", "##c", "##cd", "##d", "t", "x",
    )
    return Vocabulary(tokens=tokens, lowercase=True)


@pytest.fixture
def word_vocab() -> Vocabulary:
    # every wN word is exactly one token, for exact-fit budget arithmetic
    words = tuple(f"w{i}" for i in range(1, 31))
    tokens = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "t", "s") + words
    return Vocabulary(tokens=tokens, lowercase=True)


def make_record(record_id: str = "r1", **overrides) -> PublicationRecord:
    defaults = dict(id=record_id, title="A Clean Title", split="train")
    defaults.update(overrides)
    return PublicationRecord(**defaults)
