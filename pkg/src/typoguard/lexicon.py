"""Frequency-ranked vocabulary loading.

The vocabulary file format is one ``word<TAB>count`` entry per line, UTF-8,
with ``#``-prefixed lines treated as comments. Words are lowercased on
ingestion and duplicate counts are summed before ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class Vocabulary:
    """The N most frequent words with normalized frequencies.

    ``words`` is ordered by descending frequency, ties broken
    lexicographically; ``rho`` maps each word to its normalized frequency
    (all positive, summing to 1). All frequency comparisons elsewhere in the
    package go through ``rank`` so that tie-breaking stays consistent even
    when two normalized frequencies collide as floats.
    """

    words: tuple[str, ...]
    rho: dict[str, float]
    rank: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.rank:
            object.__setattr__(
                self, "rank", {w: i for i, w in enumerate(self.words)}
            )

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, token: str) -> bool:
        return token in self.rho

    def most_frequent(self, candidates: Iterable[str]) -> str:
        """Pick the highest-frequency word, ties lexicographic."""
        return min(candidates, key=self.rank.__getitem__)


def load_vocabulary(source: Iterable[str], max_size: int) -> Vocabulary:
    """Parse ``word<TAB>count`` lines and keep the ``max_size`` most frequent.

    Counts of repeated words (after lowercasing) are summed. The retained
    words are exactly the top ``max_size`` by (count desc, word asc), and
    their counts are renormalized to sum to 1.

    Raises ValueError on malformed lines (with the line number) or when no
    words survive.
    """
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    counts: dict[str, int] = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"line {lineno}: expected 'word<TAB>count', got {line!r}")
        word, _, count_text = line.partition("\t")
        word = word.strip().lower()
        try:
            count = int(count_text.strip())
        except ValueError:
            raise ValueError(
                f"line {lineno}: count is not an integer: {count_text!r}"
            ) from None
        if not word:
            raise ValueError(f"line {lineno}: empty word")
        if count <= 0:
            raise ValueError(f"line {lineno}: count must be positive, got {count}")
        counts[word] = counts.get(word, 0) + count

    if not counts:
        raise ValueError("no words in vocabulary source")

    ordered = sorted(counts, key=lambda w: (-counts[w], w))[:max_size]
    total = sum(counts[w] for w in ordered)
    rho = {w: counts[w] / total for w in ordered}
    return Vocabulary(words=tuple(ordered), rho=rho)


def load_vocabulary_file(path, max_size: int) -> Vocabulary:
    with open(path, encoding="utf-8") as f:
        return load_vocabulary(f, max_size)


def checksum(vocab: Vocabulary) -> str:
    """Stable digest of the ranked word list (what encoding behavior depends on)."""
    import hashlib

    h = hashlib.sha256()
    for w in vocab.words:
        h.update(w.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def total_rho(vocab: Vocabulary) -> float:
    return math.fsum(vocab.rho.values())
