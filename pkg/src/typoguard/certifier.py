"""Exact robustness certification by enumerating reachable encodings.

Because tokens are encoded independently, the encodings reachable from all
perturbations of a sentence form the Cartesian product of the per-position
reachable sets. When that product is small enough it is enumerated and each
member is fed to the classifier, which yields the exact worst-case verdict;
above the cap the example is conservatively declared non-robust. An optional
budget restricts the adversary to perturbing at most that many input
positions.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .encoder import SEP_TOKEN, Encoder
from .model import TextClassifier

DEFAULT_CAP = 10000


@dataclass(frozen=True)
class EncodingSet:
    """Reachable encodings of one sentence.

    ``total_size`` is the full product of per-position option counts even
    when a budget restricts enumeration. ``encodings`` is None exactly when
    ``truncated`` is set.
    """

    per_token_options: tuple[tuple[str, ...], ...]
    total_size: int
    truncated: bool
    encodings: tuple[tuple[str, ...], ...] | None


@dataclass(frozen=True)
class CertificationResult:
    robust: bool
    set_size: int
    truncated: bool


@dataclass(frozen=True)
class RobustnessReport:
    accuracy: float
    results: tuple[CertificationResult, ...]
    histogram: dict[int | str, int]
    fraction_size_one: float
    num_truncated: int


def reachable_tokens(encoder: Encoder, token: str) -> frozenset[str]:
    """Encoded tokens reachable from any perturbation of ``token``."""
    if not token:
        raise ValueError("token must be non-empty")
    if len(token) == 1 or token == SEP_TOKEN:
        return frozenset({encoder.encode_token(token)})
    graph = encoder.graph
    if graph.classes is not None:
        # Equivalence surface: the perturbations of the token are exactly its
        # class, so its reachable encodings are the representatives of the
        # class's vocabulary members, plus the out-of-vocabulary resolution
        # when the class contains any non-vocabulary string.
        members = graph.class_members(token)
        reach = {encoder.clustering.representative_of(u) for u in members}
        class_size = encoder.surface.perturbation_count(token)
        if class_size > len(members):
            if members:
                reach.add(encoder.clustering.representative_of(members[0]))
            else:
                reach.add(encoder.mask_token)
        return frozenset(reach)
    return frozenset(
        encoder.encode_token(t) for t in encoder.surface.perturbations(token)
    )


def reachable_encodings(
    encoder: Encoder,
    tokens: Sequence[str],
    cap: int = DEFAULT_CAP,
    budget: int | None = None,
) -> EncodingSet:
    """Enumerate the encodings reachable from perturbations of ``tokens``.

    With no budget the full product of per-position options is materialized
    when its size is within ``cap``. With a budget of b, the materialized
    set holds every sequence that differs from the clean encoding at no more
    than b positions (each differing position using one of its reachable
    options); enumeration is aborted as truncated if it outgrows ``cap``.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    if budget is not None and budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    options = tuple(
        tuple(sorted(reachable_tokens(encoder, t))) for t in tokens
    )
    total_size = math.prod(len(o) for o in options)

    if budget is None:
        if total_size > cap:
            return EncodingSet(options, total_size, True, None)
        encodings = tuple(itertools.product(*options))
        return EncodingSet(options, total_size, False, encodings)

    clean = tuple(encoder.encode_sentence(tokens))
    open_positions = [i for i, o in enumerate(options) if len(o) > 1]
    encodings_list: list[tuple[str, ...]] = []
    for k in range(0, min(budget, len(open_positions)) + 1):
        for chosen in itertools.combinations(open_positions, k):
            alternates = [
                tuple(x for x in options[i] if x != clean[i]) for i in chosen
            ]
            for combo in itertools.product(*alternates):
                e = list(clean)
                for i, x in zip(chosen, combo):
                    e[i] = x
                encodings_list.append(tuple(e))
                if len(encodings_list) > cap:
                    return EncodingSet(options, total_size, True, None)
    return EncodingSet(options, total_size, False, tuple(encodings_list))


def certify_example(
    encoder: Encoder,
    model: TextClassifier,
    tokens: Sequence[str],
    label,
    cap: int = DEFAULT_CAP,
    budget: int | None = None,
) -> CertificationResult:
    """Exact worst-case verdict: correct on every reachable encoding.

    Truncated examples are conservatively reported non-robust.
    """
    es = reachable_encodings(encoder, tokens, cap=cap, budget=budget)
    if es.truncated:
        return CertificationResult(robust=False, set_size=es.total_size, truncated=True)
    robust = all(model.predict(list(e)) == label for e in es.encodings)
    return CertificationResult(robust=robust, set_size=len(es.encodings), truncated=False)


def robust_accuracy(
    encoder: Encoder,
    model: TextClassifier,
    examples: Sequence[tuple[Sequence[str], object]],
    cap: int = DEFAULT_CAP,
    budget: int | None = None,
) -> RobustnessReport:
    """Certify every (tokens, label) example and aggregate.

    The histogram buckets examples by certified set size, with truncated
    examples collected under the "capped" key.
    """
    if not examples:
        raise ValueError("dataset is empty")
    results = tuple(
        certify_example(encoder, model, tokens, label, cap=cap, budget=budget)
        for tokens, label in examples
    )
    histogram: Counter = Counter(
        "capped" if r.truncated else r.set_size for r in results
    )
    n = len(results)
    return RobustnessReport(
        accuracy=sum(r.robust for r in results) / n,
        results=results,
        histogram=dict(histogram),
        fraction_size_one=sum(
            (not r.truncated and r.set_size == 1) for r in results
        ) / n,
        num_truncated=sum(r.truncated for r in results),
    )
