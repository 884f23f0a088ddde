"""Corpus frequency dictionary and the bounded-frequency keyword pool.

The dictionary ranks every word by its relative frequency over a chosen
document set. The keyword pool is the slice of that ranking whose
frequencies fall inside a half-open interval, cut to a maximum size; its
positions are the gene indices the optimizer works with.
"""

import csv
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

from .corpus import Corpus
from .errors import ConfigError, InputError


class WordStat(NamedTuple):
    word: str
    frequency: float
    count: int


@dataclass(frozen=True)
class FrequencyDictionary:
    """Words sorted by frequency descending, ties alphabetical."""

    entries: tuple[WordStat, ...]
    total_tokens: int

    def __len__(self) -> int:
        return len(self.entries)

    def frequency_range(self) -> tuple[float, float]:
        """(lowest, highest) observed frequency."""
        return self.entries[-1].frequency, self.entries[0].frequency


@dataclass(frozen=True)
class PoolConfig:
    """Half-open frequency window [p_min, p_max) plus a size cap."""

    p_min: float = 0.0
    p_max: float = 1e-3
    max_words: int = 1000

    def __post_init__(self):
        if not 0.0 <= self.p_min < self.p_max <= 1.0:
            raise ConfigError(
                "pool bounds must satisfy 0 <= p_min < p_max <= 1, "
                f"got [{self.p_min!r}, {self.p_max!r})"
            )
        if self.max_words < 1:
            raise ConfigError(f"max_words must be positive, got {self.max_words}")


@dataclass(frozen=True)
class KeywordPool:
    """Qualifying words in dictionary order; position = gene index."""

    words: tuple[str, ...]
    source_frequencies: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.words)


def build_frequency_dictionary(
    corpus: Corpus, doc_ids: Iterable[str]
) -> FrequencyDictionary:
    """Count every token across the selected documents.

    frequency(word) = occurrences / total tokens over exactly this
    document set.
    """
    ids = sorted(set(doc_ids))
    if not ids:
        raise InputError("cannot build a frequency dictionary from zero documents")
    counts: Counter = Counter()
    total = 0
    for doc_id in ids:
        doc = corpus.document(doc_id)
        counts.update(doc.tokens)
        total += doc.token_count
    if total == 0:
        raise InputError("selected documents contain no tokens")
    entries = tuple(
        WordStat(word, count / total, count)
        for word, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    )
    return FrequencyDictionary(entries, total)


def select_pool(dictionary: FrequencyDictionary, cfg: PoolConfig) -> KeywordPool:
    """Filter to [p_min, p_max), then keep the first max_words entries.

    The bound is half-open: a word sitting exactly at p_max is excluded.
    """
    if not dictionary.entries:
        raise InputError("frequency dictionary is empty")
    qualifying = [
        e for e in dictionary.entries if cfg.p_min <= e.frequency < cfg.p_max
    ]
    if not qualifying:
        lo, hi = dictionary.frequency_range()
        raise ConfigError(
            f"no dictionary words fall in [{cfg.p_min!r}, {cfg.p_max!r}); "
            f"observed frequencies span [{lo!r}, {hi!r}]"
        )
    kept = qualifying[: cfg.max_words]
    return KeywordPool(
        tuple(e.word for e in kept), tuple(e.frequency for e in kept)
    )


def dictionary_to_csv(dictionary: FrequencyDictionary, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "count", "frequency"])
        for entry in dictionary.entries:
            writer.writerow([entry.word, entry.count, repr(entry.frequency)])


def pool_to_csv(pool: KeywordPool, path: str | Path) -> None:
    """Pool export; rank is the 0-based gene index chromosomes refer to."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "word", "frequency"])
        for rank, (word, freq) in enumerate(zip(pool.words, pool.source_frequencies)):
            writer.writerow([rank, word, repr(freq)])
