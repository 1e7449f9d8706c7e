"""The token encoding map and its serialized artifact.

Every token is encoded independently: vocabulary words map to their cluster
representative, out-of-vocabulary tokens map to the representative of the
most frequent word that could have produced them as a typo, and everything
else maps to a mask symbol. A classifier trained on encoded text therefore
cannot distinguish a word from the typos that resolve to it, which is what
confers robustness.

The serialized artifact is a header line (surface id, gamma, vocabulary
checksum, mask symbol) followed by sorted ``word<TAB>representative`` lines;
it round-trips byte for byte.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable

from . import lexicon
from .clustering import Clustering, read_clustering, write_clustering
from .lexicon import Vocabulary
from .perturbation import AttackSurface, get_surface
from .typo_graph import TypoGraph, build_graph, resolve_typo

MASK_TOKEN = "[MASK]"
# Immutable single-character separator placed between the two texts of a
# sentence-pair example. Single-character tokens have no perturbations, and
# the encoder passes this one through unchanged so downstream models can
# still see the pair boundary.
SEP_TOKEN = "\x1e"

_PUNCT = frozenset(string.punctuation)

_HEADER_MAGIC = "typoguard-encoder"
_HEADER_VERSION = "1"


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, peel leading/trailing punctuation.

    Punctuation stuck to the outside of a chunk becomes separate
    single-character tokens; interior punctuation (as in "don't") stays put.
    """
    tokens: list[str] = []
    for chunk in text.lower().split():
        lead: list[str] = []
        while chunk and chunk[0] in _PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        trail: list[str] = []
        while chunk and chunk[-1] in _PUNCT:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trail))
    return tokens


@dataclass(frozen=True)
class Encoder:
    clustering: Clustering
    graph: TypoGraph
    gamma: float
    mask_token: str = MASK_TOKEN

    def __post_init__(self):
        if self.mask_token in self.vocab:
            raise ValueError(f"mask token {self.mask_token!r} collides with the vocabulary")

    @property
    def vocab(self) -> Vocabulary:
        return self.graph.vocab

    @property
    def surface(self) -> AttackSurface:
        return self.graph.surface

    def encode_token(self, token: str) -> str:
        if not token:
            raise ValueError("token must be non-empty")
        if token == SEP_TOKEN:
            return token
        if token in self.vocab:
            return self.clustering.representative_of(token)
        word = resolve_typo(self.graph, token)
        if word is None:
            return self.mask_token
        return self.clustering.representative_of(word)

    def encode_sentence(self, tokens: Iterable[str]) -> list[str]:
        return [self.encode_token(t) for t in tokens]

    def encode_text(self, text: str) -> list[str]:
        return self.encode_sentence(tokenize(text))


def save_encoder(encoder: Encoder, sink) -> None:
    """Write the encoder artifact (header line + clustering lines)."""
    fields = [
        _HEADER_MAGIC,
        f"v{_HEADER_VERSION}",
        f"surface={encoder.surface.kind}",
        f"gamma={float(encoder.gamma)!r}",
        f"vocab={lexicon.checksum(encoder.vocab)}",
        f"mask={encoder.mask_token}",
    ]
    sink.write("\t".join(fields) + "\n")
    write_clustering(encoder.clustering, sink)


def load_encoder(
    source: Iterable[str],
    vocab: Vocabulary,
    surface: AttackSurface | None = None,
) -> Encoder:
    """Rebuild an encoder from its artifact and the matching vocabulary.

    The header's vocabulary checksum must match ``vocab``; when ``surface``
    is given its kind must match the header. The typo graph is rebuilt from
    the vocabulary, which is deterministic, so a save/load round trip
    reproduces the encoding function exactly.
    """
    lines = iter(source)
    try:
        header = next(lines).rstrip("\n")
    except StopIteration:
        raise ValueError("empty encoder artifact") from None
    parts = header.split("\t")
    if len(parts) != 6 or parts[0] != _HEADER_MAGIC:
        raise ValueError("not a typoguard encoder artifact")
    if parts[1] != f"v{_HEADER_VERSION}":
        raise ValueError(f"unsupported encoder artifact version {parts[1]!r}")
    if any("=" not in p for p in parts[2:]):
        raise ValueError("corrupt encoder artifact header")
    meta = dict(p.split("=", 1) for p in parts[2:])
    if set(meta) != {"surface", "gamma", "vocab", "mask"}:
        raise ValueError("corrupt encoder artifact header")
    if meta["vocab"] != lexicon.checksum(vocab):
        raise ValueError("vocabulary checksum mismatch: artifact was built from a different vocabulary")
    if surface is None:
        surface = get_surface(meta["surface"])
    elif surface.kind != meta["surface"]:
        raise ValueError(
            f"surface mismatch: artifact was built for {meta['surface']!r}, got {surface.kind!r}"
        )
    clustering = read_clustering(lines, vocab)
    graph = build_graph(vocab, surface)
    return Encoder(
        clustering=clustering,
        graph=graph,
        gamma=float(meta["gamma"]),
        mask_token=meta["mask"],
    )


def save_encoder_file(encoder: Encoder, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        save_encoder(encoder, f)


def load_encoder_file(path, vocab: Vocabulary, surface: AttackSurface | None = None) -> Encoder:
    with open(path, encoding="utf-8") as f:
        return load_encoder(f, vocab, surface)
