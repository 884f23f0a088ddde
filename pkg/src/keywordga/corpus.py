"""Corpus ingestion: directory loading, tokenization, train/test splits.

A corpus root holds one subdirectory per author category; every regular
file directly inside a category directory is one document. Documents are
kept as token sequences and sorted by id so every downstream structure
has a fixed, reproducible order.
"""

import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, CorpusWarning, InputError

_TOKEN_RE = re.compile(r"[a-z]+")
_COVERAGE_RETRIES = 1000


def tokenize(raw: str) -> list[str]:
    """Split text into lowercase ASCII-letter runs.

    Digits, punctuation, whitespace and any non-ASCII character act as
    separators, so "don't" yields ["don", "t"].
    """
    return _TOKEN_RE.findall(raw.lower())


def _valid_token(token: str) -> bool:
    return bool(token) and token.isascii() and token.isalpha() and token.islower()


@dataclass(frozen=True)
class CategoryId:
    """Author category with a dense index assigned per corpus."""

    name: str
    index: int


@dataclass(frozen=True)
class Document:
    id: str
    category: CategoryId
    tokens: tuple[str, ...]

    @property
    def token_count(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    """Immutable labeled document collection.

    documents are sorted by id; categories are indexed in lexicographic
    name order.
    """

    documents: tuple[Document, ...]
    categories: tuple[CategoryId, ...]
    _by_id: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {d.id: d for d in self.documents})

    def document(self, doc_id: str) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise InputError(f"unknown document id {doc_id!r}") from None

    def doc_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.documents)

    @property
    def n_categories(self) -> int:
        return len(self.categories)


def build_corpus(entries: Iterable[tuple[str, str, Sequence[str]]]) -> Corpus:
    """Assemble a Corpus from (doc_id, category_name, tokens) triples."""
    rows = sorted(entries, key=lambda e: e[0])
    if not rows:
        raise InputError("corpus has no documents")
    ids = [doc_id for doc_id, _, _ in rows]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate document ids in corpus")
    names = sorted({name for _, name, _ in rows})
    categories = {name: CategoryId(name, index) for index, name in enumerate(names)}
    documents = []
    for doc_id, name, tokens in rows:
        toks = tuple(tokens)
        if not toks:
            raise InputError(f"document {doc_id!r} has no tokens")
        for t in toks:
            if not _valid_token(t):
                raise InputError(
                    f"document {doc_id!r} contains non-token {t!r}; "
                    "tokens must be lowercase ASCII letter runs"
                )
        documents.append(Document(doc_id, categories[name], toks))
    return Corpus(tuple(documents), tuple(categories[n] for n in names))


def load_corpus(root: str | Path, encoding: str = "utf-8") -> Corpus:
    """Read a category-per-directory corpus tree.

    Every regular file directly under root/<category>/ becomes one
    document whose id is its path relative to root. Files that tokenize
    to zero tokens are dropped with a CorpusWarning; a category whose
    files all drop out is an input error.
    """
    root = Path(root)
    if not root.is_dir():
        raise InputError(f"corpus root {root} is not a readable directory")
    category_dirs = sorted(
        p for p in root.iterdir() if p.is_dir() and not p.name.startswith(".")
    )
    if not category_dirs:
        raise InputError(f"corpus root {root} contains no category directories")
    entries = []
    for cat_dir in category_dirs:
        files = sorted(
            p for p in cat_dir.iterdir() if p.is_file() and not p.name.startswith(".")
        )
        if not files:
            raise InputError(f"category directory {cat_dir} contains no files")
        kept = 0
        for path in files:
            try:
                data = path.read_bytes()
            except OSError as exc:
                raise InputError(f"cannot read {path}: {exc}") from exc
            try:
                text = data.decode(encoding)
            except UnicodeDecodeError as exc:
                raise InputError(
                    f"{path}: undecodable byte at offset {exc.start}"
                ) from exc
            tokens = tokenize(text)
            if not tokens:
                warnings.warn(
                    f"{path} tokenizes to zero tokens; document excluded",
                    CorpusWarning,
                    stacklevel=2,
                )
                continue
            entries.append((path.relative_to(root).as_posix(), cat_dir.name, tokens))
            kept += 1
        if kept == 0:
            raise InputError(f"category directory {cat_dir} has no non-empty documents")
    return build_corpus(entries)


@dataclass(frozen=True)
class Split:
    train: frozenset[str]
    test: frozenset[str]
    seed: int


def split_corpus(corpus: Corpus, train_count: int, seed: int) -> Split:
    """Deterministically sample a train/test split.

    Draws train_count ids uniformly without replacement and retries a
    bounded number of times until every corpus category lands in train
    (a category the classifier never saw cannot be predicted).
    """
    n = len(corpus.documents)
    if not 1 <= train_count < n:
        raise ConfigError(
            f"train_count must be in [1, {n - 1}] for {n} documents, got {train_count}"
        )
    if train_count < corpus.n_categories:
        raise ConfigError(
            f"train_count={train_count} cannot cover {corpus.n_categories} categories"
        )
    rng = np.random.default_rng(seed)
    train_ids = _draw_covering_sample(corpus, corpus.doc_ids(), train_count, rng)
    test_ids = frozenset(corpus.doc_ids()) - train_ids
    return Split(train_ids, test_ids, seed)


def _draw_covering_sample(
    corpus: Corpus, candidate_ids: Iterable[str], count: int, rng: np.random.Generator
) -> frozenset[str]:
    """Sample `count` ids so that every category present among the
    candidates appears in the sample. Shared by split_corpus and the
    validation carve in the pipeline."""
    ids = tuple(sorted(candidate_ids))
    required = {corpus.document(i).category.name for i in ids}
    for _ in range(_COVERAGE_RETRIES):
        chosen = rng.choice(len(ids), size=count, replace=False)
        sample = frozenset(ids[int(i)] for i in chosen)
        covered = {corpus.document(i).category.name for i in sample}
        if covered == required:
            return sample
    raise ConfigError(
        f"could not cover all {len(required)} categories in a sample of "
        f"{count} after {_COVERAGE_RETRIES} attempts"
    )


def dump_documents_jsonl(corpus: Corpus, path: str | Path) -> None:
    """Debug dump: one JSON object per document (id, category, token_count)."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(
                json.dumps(
                    {
                        "id": doc.id,
                        "category": doc.category.name,
                        "token_count": doc.token_count,
                    }
                )
                + "\n"
            )
