from __future__ import annotations

from pathlib import Path

import pytest

from sdverify import VerifierConfig, compile_lexicon, load_corpus, load_starter_lexicon

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def demo_paths() -> tuple[Path, Path]:
    return FIXTURES / "demo" / "posts.jsonl", FIXTURES / "demo" / "members.jsonl"


@pytest.fixture(scope="session")
def demo_corpus(demo_paths):
    return load_corpus(*demo_paths)


@pytest.fixture(scope="session")
def starter_lexicon():
    return load_starter_lexicon()


@pytest.fixture(scope="session")
def starter_matcher(starter_lexicon):
    return compile_lexicon(starter_lexicon)


@pytest.fixture()
def default_config():
    return VerifierConfig()
