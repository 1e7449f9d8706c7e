"""Typo graph construction against brute-force oracles."""

from __future__ import annotations

import io

import pytest

from typoguard import (
    build_graph,
    connected_components,
    get_surface,
    load_vocabulary,
    resolve_typo,
)
from typoguard.typo_graph import dump_edges

from conftest import make_vocab

ED1 = get_surface("ed1")
INTPERM = get_surface("intperm")


def brute_force_adjacency(vocab, surface):
    """Double loop over word pairs, intersecting full perturbation sets."""
    neighbors = {w: set() for w in vocab.words}
    for i, w1 in enumerate(vocab.words):
        b1 = surface.perturbations(w1)
        for w2 in vocab.words[i + 1 :]:
            if b1 & surface.perturbations(w2):
                neighbors[w1].add(w2)
                neighbors[w2].add(w1)
    return neighbors


def brute_force_destinations(vocab, surface):
    """Resolve each typo by scanning the whole vocabulary, then collect."""
    def resolve(token):
        if token in vocab:
            return token
        generators = [w for w in vocab.words if surface.is_perturbation(w, token)]
        return vocab.most_frequent(generators) if generators else None

    return {
        w: {resolve(t) for t in surface.perturbations(w)} for w in vocab.words
    }


def test_fig_fragment_edges_and_component(demo_vocab, demo_graph):
    # "aut" is a typo of both "at" (insertion) and "aunt" (deletion)
    assert ED1.is_perturbation("at", "aut") and ED1.is_perturbation("aunt", "aut")
    assert "aunt" in demo_graph.adjacency["at"]
    # "aet" is a typo of both "at" and "abet"
    assert ED1.is_perturbation("at", "aet") and ED1.is_perturbation("abet", "aet")
    assert "abet" in demo_graph.adjacency["at"]
    clusters = connected_components(demo_graph)
    assert clusters.partition() == frozenset(
        {frozenset({"at", "aunt", "about", "abrupt", "abet"})}
    )


def test_resolution_prefers_most_frequent_neighbor(demo_vocab, demo_graph):
    assert demo_vocab.rho["at"] > demo_vocab.rho["aunt"]
    assert resolve_typo(demo_graph, "aut") == "at"
    assert resolve_typo(demo_graph, "aet") == "at"


def test_resolution_vocab_precedence_and_oov(demo_graph):
    assert resolve_typo(demo_graph, "aunt") == "aunt"
    assert resolve_typo(demo_graph, "zzzzzz") is None


def test_single_word_vocab():
    vocab = load_vocabulary(["a\t1"], max_size=5)
    graph = build_graph(vocab, ED1)
    assert graph.adjacency == {"a": frozenset()}
    assert graph.destination_sets == {"a": frozenset({"a"})}
    clusters = connected_components(graph)
    assert clusters.partition() == frozenset({frozenset({"a"})})


def test_adjacency_matches_brute_force(small_vocab, small_graph):
    expected = brute_force_adjacency(small_vocab, ED1)
    assert {w: set(s) for w, s in small_graph.adjacency.items()} == expected
    for w, neighbors in small_graph.adjacency.items():
        assert w not in neighbors  # irreflexive


def test_destinations_match_brute_force(small_vocab, small_graph):
    expected = brute_force_destinations(small_vocab, ED1)
    assert {w: set(s) for w, s in small_graph.destination_sets.items()} == expected


def test_destination_set_structure(small_vocab, small_graph):
    for w in small_vocab.words:
        dests = small_graph.destination_sets[w]
        assert w in dests
        assert dests <= {w} | small_graph.adjacency[w]


def test_destinations_stay_within_one_component(small_vocab, small_graph):
    clusters = connected_components(small_graph)
    for w in small_vocab.words:
        hit = {clusters.assignment[u] for u in small_graph.destination_sets[w]}
        assert len(hit) == 1


def test_resolved_typos_never_oov(small_vocab, small_graph):
    for w in small_vocab.words[:10]:
        for t in sorted(ED1.perturbations(w)):
            assert resolve_typo(small_graph, t) is not None


def test_intperm_graph_matches_enumeration():
    vocab = make_vocab(25, seed=5, alphabet="abc", min_len=2, max_len=5)
    fast = build_graph(vocab, INTPERM)
    assert {w: set(s) for w, s in fast.adjacency.items()} == brute_force_adjacency(
        vocab, INTPERM
    )
    assert {
        w: set(s) for w, s in fast.destination_sets.items()
    } == brute_force_destinations(vocab, INTPERM)


def test_intperm_resolution_by_signature():
    vocab = load_vocabulary(["stale\t100", "slate\t60", "tales\t40"], max_size=10)
    graph = build_graph(vocab, INTPERM)
    # "sltae" shares endpoints and interior multiset with stale and slate,
    # and resolves to the more frequent of the two
    assert resolve_typo(graph, "sltae") == "stale"
    assert resolve_typo(graph, "tales") == "tales"
    assert resolve_typo(graph, "pqrs") is None
    assert graph.adjacency["stale"] == frozenset({"slate"})
    assert graph.adjacency["tales"] == frozenset()


def test_no_shared_typos_gives_singletons():
    vocab = load_vocabulary(["apple\t3", "zebra\t2"], max_size=5)
    clusters = connected_components(build_graph(vocab, ED1))
    assert clusters.partition() == frozenset(
        {frozenset({"apple"}), frozenset({"zebra"})}
    )


def test_empty_vocab_rejected():
    vocab = load_vocabulary(["a\t1"], max_size=1)
    object.__setattr__(vocab, "words", ())
    with pytest.raises(ValueError):
        build_graph(vocab, ED1)


def test_edge_dump_sorted(demo_graph):
    sink = io.StringIO()
    dump_edges(demo_graph, sink)
    lines = sink.getvalue().splitlines()
    assert lines == sorted(lines)
    assert all(len(line.split("\t")) == 2 for line in lines)
    parsed = {tuple(line.split("\t")) for line in lines}
    assert ("at", "aunt") in parsed
