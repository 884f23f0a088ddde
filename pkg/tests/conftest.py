import numpy as np
import pytest

from keywordga import build_corpus, load_corpus, make_synthetic_corpus


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tiny_corpus():
    return build_corpus(
        [
            ("a/one.txt", "a", ["the", "cat", "sat"]),
            ("a/two.txt", "a", ["the", "dog", "ran", "far"]),
            ("b/one.txt", "b", ["a", "bird", "flew"]),
            ("b/two.txt", "b", ["the", "bird", "sang", "loud"]),
            ("c/one.txt", "c", ["fish", "swim"]),
        ]
    )


@pytest.fixture(scope="session")
def synth_root(tmp_path_factory):
    """A 6-author planted-marker corpus shared by read-only tests."""
    root = tmp_path_factory.mktemp("synth") / "corpus"
    manifest = make_synthetic_corpus(root, 6, 10, 200, 3, seed=2024)
    return root, manifest


@pytest.fixture(scope="session")
def synth_corpus(synth_root):
    root, manifest = synth_root
    return load_corpus(root), manifest
