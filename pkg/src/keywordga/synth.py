"""Deterministic synthetic corpora with planted author markers.

Every author shares one Zipf-shaped background vocabulary and owns a few
exclusive marker words injected at a fixed share of each document's
tokens. The returned manifest records the marker identities and exact
per-document counts, so tests can check both tokenization and whether
the optimizer recovers the planted signal.
"""

import json
from collections import Counter
from pathlib import Path

import numpy as np

from .errors import ConfigError, InputError

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"
_LINE_WIDTH = 12


def _synth_word(prefix: str, n: int) -> str:
    if n >= 26**3:
        raise ConfigError("synthetic vocabulary exhausted (26^3 words per prefix)")
    a, rem = divmod(n, 26 * 26)
    b, c = divmod(rem, 26)
    return prefix + _ALPHABET[a] + _ALPHABET[b] + _ALPHABET[c]


def make_synthetic_corpus(
    root: str | Path,
    n_authors: int,
    docs_per_author: int,
    tokens_per_doc: int,
    marker_words_per_author: int,
    seed: int,
    *,
    background_words: int = 120,
    marker_share: float = 0.1,
) -> dict:
    """Write a category-per-directory corpus and its manifest.json.

    Background tokens are drawn from a shared 1/rank distribution over
    `background_words` words ("b..." prefix); with probability
    `marker_share` a token is instead one of the author's own marker
    words ("m..." prefix). Deterministic for a fixed seed.
    """
    for name, value in (
        ("n_authors", n_authors),
        ("docs_per_author", docs_per_author),
        ("tokens_per_doc", tokens_per_doc),
        ("marker_words_per_author", marker_words_per_author),
        ("background_words", background_words),
    ):
        if value < 1:
            raise ConfigError(f"{name} must be >= 1, got {value}")
    if not 0.0 < marker_share < 1.0:
        raise ConfigError(f"marker_share must be in (0, 1), got {marker_share}")
    root = Path(root)
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create corpus directory {root}: {exc}") from exc
    rng = np.random.default_rng(seed)
    background = [_synth_word("b", i) for i in range(background_words)]
    weights = 1.0 / np.arange(1, background_words + 1)
    background_p = weights / weights.sum()
    authors = []
    manifest_docs = []
    for a in range(n_authors):
        name = f"author_{a:02d}"
        markers = [
            _synth_word("m", a * marker_words_per_author + t)
            for t in range(marker_words_per_author)
        ]
        marker_set = set(markers)
        authors.append({"name": name, "markers": markers})
        author_dir = root / name
        try:
            author_dir.mkdir(exist_ok=True)
        except OSError as exc:
            raise InputError(f"cannot create {author_dir}: {exc}") from exc
        for d in range(docs_per_author):
            use_marker = rng.random(tokens_per_doc) < marker_share
            marker_pick = rng.integers(
                0, marker_words_per_author, size=tokens_per_doc
            )
            background_pick = rng.choice(
                background_words, size=tokens_per_doc, p=background_p
            )
            tokens = [
                markers[marker_pick[i]] if use_marker[i] else background[background_pick[i]]
                for i in range(tokens_per_doc)
            ]
            rel_id = f"{name}/doc_{d:03d}.txt"
            lines = [
                " ".join(tokens[i : i + _LINE_WIDTH])
                for i in range(0, len(tokens), _LINE_WIDTH)
            ]
            try:
                (root / rel_id).write_text("\n".join(lines) + "\n", encoding="utf-8")
            except OSError as exc:
                raise InputError(f"cannot write {root / rel_id}: {exc}") from exc
            marker_counts = Counter(t for t in tokens if t in marker_set)
            manifest_docs.append(
                {
                    "id": rel_id,
                    "author": name,
                    "token_count": len(tokens),
                    "marker_counts": dict(sorted(marker_counts.items())),
                }
            )
    manifest = {
        "root": str(root),
        "seed": int(seed),
        "n_authors": n_authors,
        "docs_per_author": docs_per_author,
        "tokens_per_doc": tokens_per_doc,
        "marker_words_per_author": marker_words_per_author,
        "background_words": background_words,
        "marker_share": marker_share,
        "authors": authors,
        "documents": manifest_docs,
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest
