"""Shared fixtures: small vocabularies with known typo structure and toy datasets."""

from __future__ import annotations

import random

import pytest

from typoguard import (
    Dataset,
    Example,
    Vocabulary,
    build_graph,
    get_surface,
    load_vocabulary,
)

# Five words whose typo graph is fully worked out in the tests: "aut" is a
# shared typo of at/aunt, "aet" of at/abet, and the five words form a single
# connected component under single-edit typos.
DEMO_WORDS = [("at", 1000), ("aunt", 200), ("about", 150), ("abrupt", 80), ("abet", 3)]


@pytest.fixture(scope="session")
def demo_vocab() -> Vocabulary:
    return load_vocabulary([f"{w}\t{c}" for w, c in DEMO_WORDS], max_size=10)


@pytest.fixture(scope="session")
def demo_graph(demo_vocab):
    return build_graph(demo_vocab, get_surface("ed1"))


def make_vocab_lines(num_words: int, seed: int, alphabet: str = "abcdef",
                     min_len: int = 2, max_len: int = 5) -> list[str]:
    """word<TAB>count lines for a random short-word vocabulary.

    Short words over few letters share typos densely, which gives the typo
    graph interesting components at desk scale. Counts decay like a zipf law
    so frequency ranks are unambiguous and stable.
    """
    rng = random.Random(seed)
    words = set()
    while len(words) < num_words:
        length = rng.randint(min_len, max_len)
        words.add("".join(rng.choice(alphabet) for _ in range(length)))
    ordered = sorted(words)
    rng.shuffle(ordered)
    return [f"{w}\t{max(1, int(1_000_000 / (i + 2)))}" for i, w in enumerate(ordered)]


def make_vocab(num_words: int, seed: int, alphabet: str = "abcdef",
               min_len: int = 2, max_len: int = 5) -> Vocabulary:
    lines = make_vocab_lines(num_words, seed, alphabet, min_len, max_len)
    return load_vocabulary(lines, max_size=num_words)


@pytest.fixture(scope="session")
def desk_vocab() -> Vocabulary:
    return make_vocab(600, seed=7)


@pytest.fixture(scope="session")
def desk_graph(desk_vocab):
    return build_graph(desk_vocab, get_surface("ed1"))


@pytest.fixture(scope="session")
def small_vocab() -> Vocabulary:
    return make_vocab(50, seed=3, alphabet="abcd", min_len=2, max_len=4)


@pytest.fixture(scope="session")
def small_graph(small_vocab):
    return build_graph(small_vocab, get_surface("ed1"))


def make_dataset(vocab: Vocabulary, num_examples: int, seed: int,
                 pair: bool = False, min_tokens: int = 3, max_tokens: int = 6) -> Dataset:
    """Two-class toy dataset drawn from the vocabulary.

    Class words come from the top and bottom halves of the frequency ranking
    so that bag-of-words classes are (mostly) separable after encoding.
    """
    rng = random.Random(seed)
    half = max(1, len(vocab.words) // 2)
    pools = {"pos": list(vocab.words[:half]), "neg": list(vocab.words[half:])}
    examples = []
    for _ in range(num_examples):
        label = rng.choice(["pos", "neg"])
        pool = pools[label]

        def sentence() -> str:
            k = rng.randint(min_tokens, max_tokens)
            return " ".join(rng.choice(pool) for _ in range(k))

        examples.append(
            Example(label=label, text1=sentence(), text2=sentence() if pair else None)
        )
    labels = tuple(sorted({e.label for e in examples}))
    return Dataset(examples=tuple(examples), labels=labels)


def dataset_lines(dataset: Dataset) -> list[str]:
    lines = []
    for e in dataset.examples:
        fields = [e.label, e.text1] + ([e.text2] if e.text2 is not None else [])
        lines.append("\t".join(fields))
    return lines
