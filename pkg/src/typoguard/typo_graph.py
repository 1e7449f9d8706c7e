"""Shared-typo graph over the vocabulary and typo resolution.

Two vocabulary words are adjacent when some typo can be produced from both.
Each word also gets a destination set: the vocabulary words its typos
resolve to, where a typo resolves to itself if it is a vocabulary word and
otherwise to the most frequent word that can produce it (ties
lexicographic). Out-of-vocabulary tokens that no word can produce resolve to
nothing.

For the edit-distance surface the graph is built from a typo -> generating
words index, so memory scales with the total number of enumerated typos.
The interior-permutation surface induces an equivalence relation, so its
graph is built directly from signature classes; the result is identical to
what enumeration would produce, without the factorial blowup.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .clustering import Clustering
from .lexicon import Vocabulary
from .perturbation import AttackSurface


@dataclass(frozen=True)
class TypoGraph:
    vocab: Vocabulary
    surface: AttackSurface
    adjacency: dict[str, frozenset[str]]
    destination_sets: dict[str, frozenset[str]]
    # typo string -> most frequent generating word (enumeration surfaces)
    typo_targets: dict[str, str] | None = field(repr=False, default=None)
    # class key -> members in frequency-rank order (equivalence surfaces)
    classes: dict[str, tuple[str, ...]] | None = field(repr=False, default=None)

    def class_members(self, token: str) -> tuple[str, ...]:
        """Vocabulary words sharing the token's perturbation class."""
        if self.classes is None:
            raise ValueError("surface has no perturbation classes")
        return self.classes.get(self.surface.class_key(token), ())


def build_graph(vocab: Vocabulary, surface: AttackSurface) -> TypoGraph:
    """Construct adjacency, destination sets, and the resolution index."""
    if len(vocab) == 0:
        raise ValueError("vocabulary is empty")
    if surface.class_key(vocab.words[0]) is not None:
        return _build_from_classes(vocab, surface)
    return _build_from_typo_index(vocab, surface)


def _build_from_typo_index(vocab: Vocabulary, surface: AttackSurface) -> TypoGraph:
    generators: dict[str, list[str]] = defaultdict(list)
    for w in vocab.words:  # rank order, so generators[t][0] is the resolution
        for t in surface.perturbations(w):
            generators[t].append(w)

    neighbors: dict[str, set[str]] = {w: set() for w in vocab.words}
    for gens in generators.values():
        for i, w1 in enumerate(gens):
            for w2 in gens[i + 1 :]:
                neighbors[w1].add(w2)
                neighbors[w2].add(w1)

    typo_targets = {t: gens[0] for t, gens in generators.items()}
    in_vocab = vocab.rho
    destination_sets = {}
    for w in vocab.words:
        destination_sets[w] = frozenset(
            t if t in in_vocab else typo_targets[t] for t in surface.perturbations(w)
        )

    return TypoGraph(
        vocab=vocab,
        surface=surface,
        adjacency={w: frozenset(s) for w, s in neighbors.items()},
        destination_sets=destination_sets,
        typo_targets=typo_targets,
    )


def _build_from_classes(vocab: Vocabulary, surface: AttackSurface) -> TypoGraph:
    classes: dict[str, list[str]] = defaultdict(list)
    for w in vocab.words:  # rank order preserved within each class
        classes[surface.class_key(w)].append(w)

    adjacency = {}
    destination_sets = {}
    for group in classes.values():
        members = frozenset(group)
        for w in group:
            adjacency[w] = members - {w}
            # every string in the class resolves either to itself (if in the
            # vocabulary) or to the class's most frequent word, so the
            # destinations are exactly the vocabulary members of the class
            destination_sets[w] = members

    return TypoGraph(
        vocab=vocab,
        surface=surface,
        adjacency=adjacency,
        destination_sets=destination_sets,
        classes={k: tuple(g) for k, g in classes.items()},
    )


def resolve_typo(graph: TypoGraph, token: str) -> str | None:
    """Vocabulary word the token resolves to, or None when out of reach.

    Vocabulary membership wins; otherwise the most frequent word that can
    produce the token (ties lexicographic); otherwise None.
    """
    if token in graph.vocab:
        return token
    if graph.classes is not None:
        members = graph.classes.get(graph.surface.class_key(token))
        return members[0] if members else None
    return graph.typo_targets.get(token)


def connected_components(graph: TypoGraph) -> Clustering:
    """Partition the vocabulary into maximal typo-connected components."""
    seen: set[str] = set()
    groups: list[list[str]] = []
    for start in graph.vocab.words:
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        component = []
        while stack:
            w = stack.pop()
            component.append(w)
            for u in graph.adjacency[w]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        groups.append(component)
    return Clustering.from_groups(graph.vocab, groups)


def dump_edges(graph: TypoGraph, sink) -> None:
    """Write the sorted ``word<TAB>neighbor`` edge list (each edge once)."""
    edges = sorted(
        (w, u) for w, neighbors in graph.adjacency.items() for u in neighbors if w < u
    )
    for w, u in edges:
        sink.write(f"{w}\t{u}\n")
