"""Cluster partitions of the vocabulary and the objectives that rank them.

A clustering trades off two costs. The stability cost is the
frequency-weighted average number of distinct clusters a word's typos can
resolve to; it is minimized (value exactly 1) when every word's typo
destinations land in a single cluster. The fidelity cost is the
frequency-weighted squared distance between each word's indicator vector and
its cluster's frequency-weighted centroid; it is 0 when every word sits in
its own cluster. The combined objective interpolates the two with a weight
``gamma`` in [0, 1] and is minimized greedily by merging typo-adjacent
clusters: gamma 0 recovers the connected components of the typo graph, and
gamma 1 leaves every word alone.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

from .lexicon import Vocabulary

if TYPE_CHECKING:
    from .typo_graph import TypoGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Clustering:
    """A partition of the vocabulary with one representative per cluster.

    The representative is the cluster's most frequent member (ties broken
    lexicographically) and serves as the encoded token downstream.
    """

    assignment: dict[str, int]
    members: dict[int, frozenset[str]]
    representative: dict[int, str]

    @classmethod
    def from_groups(
        cls, vocab: Vocabulary, groups: Iterable[Iterable[str]]
    ) -> "Clustering":
        """Build from disjoint word groups covering the vocabulary.

        Cluster ids are assigned in order of representative frequency rank,
        so equal partitions always produce identical Clustering objects.
        """
        sets = [frozenset(g) for g in groups]
        seen: set[str] = set()
        for s in sets:
            if not s:
                raise ValueError("empty cluster")
            if s & seen:
                raise ValueError(f"overlapping clusters: {sorted(s & seen)}")
            seen |= s
        if seen != set(vocab.words):
            missing = set(vocab.words) - seen
            extra = seen - set(vocab.words)
            raise ValueError(
                f"clusters must partition the vocabulary "
                f"(missing={sorted(missing)[:5]}, extra={sorted(extra)[:5]})"
            )
        reps = {s: vocab.most_frequent(s) for s in sets}
        ordered = sorted(sets, key=lambda s: vocab.rank[reps[s]])
        members = {cid: s for cid, s in enumerate(ordered)}
        representative = {cid: reps[s] for cid, s in enumerate(ordered)}
        assignment = {w: cid for cid, s in members.items() for w in s}
        return cls(assignment=assignment, members=members, representative=representative)

    def partition(self) -> frozenset[frozenset[str]]:
        """The bare partition, for order-insensitive equality checks."""
        return frozenset(self.members.values())

    def representative_of(self, word: str) -> str:
        return self.representative[self.assignment[word]]


@dataclass(frozen=True)
class ObjectiveValue:
    """Stability and fidelity costs plus their gamma-weighted combination."""

    stability: float
    fidelity: float
    combined: float
    gamma: float


def _check_partition(clustering: Clustering, vocab: Vocabulary) -> None:
    if set(clustering.assignment) != set(vocab.words):
        raise ValueError("clustering does not partition this vocabulary")


def stability_cost(clustering: Clustering, graph: "TypoGraph") -> float:
    """Frequency-weighted count of clusters reachable from each word's typos.

    Always >= 1, with equality iff every word's typo destinations lie in a
    single cluster (the connected-component clustering achieves this).
    """
    vocab = graph.vocab
    _check_partition(clustering, vocab)
    assign = clustering.assignment
    return math.fsum(
        vocab.rho[w] * len({assign[u] for u in graph.destination_sets[w]})
        for w in vocab.words
    )


def fidelity_cost(clustering: Clustering, vocab: Vocabulary) -> float:
    """Frequency-weighted squared distance of each word to its cluster centroid.

    Words are indicator vectors and each cluster's centroid weights members
    by normalized frequency, so for word i in cluster c the squared distance
    collapses to ``(1 - rho_i/R)^2 + (S - rho_i^2)/R^2`` with R and S the
    cluster's sum of frequencies and of squared frequencies.
    """
    _check_partition(clustering, vocab)
    cluster_R: dict[int, float] = {}
    cluster_S: dict[int, float] = {}
    for cid, words in clustering.members.items():
        ordered = sorted(words)
        cluster_R[cid] = math.fsum(vocab.rho[w] for w in ordered)
        cluster_S[cid] = math.fsum(vocab.rho[w] ** 2 for w in ordered)
    terms = []
    for w in vocab.words:
        cid = clustering.assignment[w]
        r, R, S = vocab.rho[w], cluster_R[cid], cluster_S[cid]
        sq_dist = (1.0 - r / R) ** 2 + (S - r * r) / (R * R)
        terms.append(r * sq_dist)
    return math.fsum(terms)


def combined_cost(
    clustering: Clustering, graph: "TypoGraph", gamma: float
) -> ObjectiveValue:
    """gamma-weighted mix of fidelity and stability costs (lower is better)."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    stab = stability_cost(clustering, graph)
    fid = fidelity_cost(clustering, graph.vocab)
    return ObjectiveValue(
        stability=stab,
        fidelity=fid,
        combined=gamma * fid + (1.0 - gamma) * stab,
        gamma=gamma,
    )


@dataclass(frozen=True)
class MergeStep:
    """One accepted merge, with the objective before and after."""

    rep_a: str
    rep_b: str
    before: ObjectiveValue
    after: ObjectiveValue


def agglomerative_cluster(
    vocab: Vocabulary,
    graph: "TypoGraph",
    gamma: float,
    merge_log: list[MergeStep] | None = None,
) -> Clustering:
    """Greedily merge typo-adjacent clusters while the combined cost drops.

    Starts from singletons. Each round evaluates every pair of clusters
    joined by at least one typo-graph edge and merges the pair with the
    largest strict decrease in the combined cost; equal decreases are broken
    by the lexicographically smallest pair of representatives. Stops when no
    merge strictly decreases the cost, so gamma 0 ends at the connected
    components and gamma 1 keeps all singletons.

    When ``merge_log`` is given, each accepted merge is appended with fully
    recomputed objective values (slower; meant for auditing).
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    words = vocab.words
    rho = vocab.rho
    rank = vocab.rank

    cluster_words: dict[int, list[str]] = {i: [w] for i, w in enumerate(words)}
    rep: dict[int, str] = {i: w for i, w in enumerate(words)}
    word_cid = {w: i for i, w in enumerate(words)}
    # Per-cluster frequency sums, recomputed canonically (sorted members,
    # fsum) after every merge so cached values match a from-scratch pass.
    R = {i: rho[w] for i, w in enumerate(words)}
    S = {i: rho[w] ** 2 for i, w in enumerate(words)}
    # Words whose destination set touches the cluster: merging clusters a, b
    # lowers the stability cost by rho(w) exactly for the words touching both.
    hitters: dict[int, set[str]] = {i: set() for i in range(len(words))}
    for w in words:
        for u in graph.destination_sets[w]:
            hitters[word_cid[u]].add(w)
    adj: dict[int, set[int]] = {i: set() for i in range(len(words))}
    for w, neighbors in graph.adjacency.items():
        for u in neighbors:
            if w < u:
                adj[word_cid[w]].add(word_cid[u])
                adj[word_cid[u]].add(word_cid[w])

    def current_clustering() -> Clustering:
        return Clustering.from_groups(vocab, cluster_words.values())

    def fid_of(cid: int) -> float:
        return R[cid] - S[cid] / R[cid]

    next_cid = len(words)
    for _ in range(max(0, len(words) - 1)):
        best_delta = 0.0
        best_pair: tuple[int, int] | None = None
        best_key: tuple[str, str] | None = None
        for a in adj:
            for b in adj[a]:
                if b <= a:
                    continue
                merged_R = R[a] + R[b]
                merged_S = S[a] + S[b]
                delta_fid = (merged_R - merged_S / merged_R) - fid_of(a) - fid_of(b)
                small, large = (
                    (hitters[a], hitters[b])
                    if len(hitters[a]) <= len(hitters[b])
                    else (hitters[b], hitters[a])
                )
                delta_stab = -math.fsum(rho[w] for w in small if w in large)
                delta = gamma * delta_fid + (1.0 - gamma) * delta_stab
                if delta >= 0.0:
                    continue
                key = (
                    (rep[a], rep[b]) if rep[a] < rep[b] else (rep[b], rep[a])
                )
                if (
                    best_pair is None
                    or delta < best_delta
                    or (delta == best_delta and key < best_key)
                ):
                    best_delta, best_pair, best_key = delta, (a, b), key
        if best_pair is None:
            break

        a, b = best_pair
        before = combined_cost(current_clustering(), graph, gamma) if merge_log is not None else None
        m = next_cid
        next_cid += 1
        cluster_words[m] = cluster_words.pop(a) + cluster_words.pop(b)
        for w in cluster_words[m]:
            word_cid[w] = m
        ordered = sorted(cluster_words[m])
        R[m] = math.fsum(rho[w] for w in ordered)
        S[m] = math.fsum(rho[w] ** 2 for w in ordered)
        del R[a], R[b], S[a], S[b]
        rep[m] = min(cluster_words[m], key=rank.__getitem__)
        del rep[a], rep[b]
        hitters[m] = hitters.pop(a) | hitters.pop(b)
        adj[m] = (adj.pop(a) | adj.pop(b)) - {a, b}
        for x in adj[m]:
            adj[x].discard(a)
            adj[x].discard(b)
            adj[x].add(m)

        if merge_log is not None:
            after = combined_cost(current_clustering(), graph, gamma)
            step = MergeStep(rep_a=best_key[0], rep_b=best_key[1], before=before, after=after)
            merge_log.append(step)
            logger.debug(
                "merge %s+%s: combined %.12g -> %.12g",
                step.rep_a, step.rep_b, before.combined, after.combined,
            )

    return current_clustering()


def write_clustering(clustering: Clustering, sink) -> None:
    """Write ``word<TAB>representative`` lines sorted by word."""
    pairs = sorted(
        (w, clustering.representative[cid]) for w, cid in clustering.assignment.items()
    )
    for w, r in pairs:
        sink.write(f"{w}\t{r}\n")


def read_clustering(lines: Iterable[str], vocab: Vocabulary) -> Clustering:
    """Parse ``word<TAB>representative`` lines back into a Clustering."""
    rep_of: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if "\t" not in line:
            raise ValueError(f"clustering line {lineno}: expected 'word<TAB>representative'")
        word, _, r = line.partition("\t")
        if word in rep_of:
            raise ValueError(f"clustering line {lineno}: duplicate word {word!r}")
        if word not in vocab:
            raise ValueError(f"clustering line {lineno}: {word!r} not in vocabulary")
        if r not in vocab:
            raise ValueError(f"clustering line {lineno}: representative {r!r} not in vocabulary")
        rep_of[word] = r
    if not rep_of:
        raise ValueError("empty clustering")
    groups: dict[str, set[str]] = {}
    for w, r in rep_of.items():
        groups.setdefault(r, set()).add(w)
    for r, g in groups.items():
        if rep_of.get(r) != r:
            raise ValueError(f"representative {r!r} is not mapped to itself")
        if vocab.most_frequent(g) != r:
            raise ValueError(
                f"representative {r!r} is not the most frequent member of its cluster"
            )
    return Clustering.from_groups(vocab, groups.values())
