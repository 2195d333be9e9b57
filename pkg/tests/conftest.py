import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from tvpoisson.corpus import make_corpus


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    """Ten-image synthetic benchmark corpus, generated once per session."""
    out = tmp_path_factory.mktemp("corpus")
    make_corpus(out, seed=7)
    return out
