"""End-to-end orchestration: datasets, the composed classifier, reports.

Datasets are TSV files with one example per line, ``label<TAB>text1`` or
``label<TAB>text1<TAB>text2`` for sentence pairs. Pair texts are tokenized
separately and joined with the immutable separator token, so the same flat
token list flows through training, certification, and attacks.

Reports are plain dicts with a fixed key order so serialized output is
byte-stable given the same artifacts and seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .attacker import BeamSearchConfig, evaluate_attack
from .certifier import DEFAULT_CAP, robust_accuracy
from .clustering import agglomerative_cluster
from .encoder import SEP_TOKEN, Encoder, tokenize
from .lexicon import Vocabulary
from .model import BowLinearModel, TextClassifier
from .perturbation import AttackSurface
from .typo_graph import build_graph, connected_components


@dataclass(frozen=True)
class Example:
    label: str
    text1: str
    text2: str | None = None


@dataclass(frozen=True)
class Dataset:
    examples: tuple[Example, ...]
    labels: tuple[str, ...]


def load_dataset(
    lines: Iterable[str],
    has_header: bool = False,
    label_set: Sequence[str] | None = None,
) -> Dataset:
    """Parse ``label<TAB>text1[<TAB>text2]`` lines.

    Duplicate lines are retained. When ``label_set`` is given, any other
    label is an error; otherwise labels are collected from the data.
    """
    examples: list[Example] = []
    allowed = set(label_set) if label_set is not None else None
    for lineno, raw in enumerate(lines, start=1):
        if has_header and lineno == 1:
            continue
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) not in (2, 3):
            raise ValueError(
                f"line {lineno}: expected 'label<TAB>text1[<TAB>text2]', got {len(parts)} fields"
            )
        label, text1 = parts[0], parts[1]
        text2 = parts[2] if len(parts) == 3 else None
        if not text1.strip():
            raise ValueError(f"line {lineno}: empty text")
        if allowed is not None and label not in allowed:
            raise ValueError(f"line {lineno}: unknown label {label!r}")
        examples.append(Example(label=label, text1=text1, text2=text2))
    if not examples:
        raise ValueError("dataset is empty")
    labels = tuple(label_set) if label_set is not None else tuple(
        sorted({e.label for e in examples})
    )
    return Dataset(examples=tuple(examples), labels=labels)


def load_dataset_file(path, has_header: bool = False, label_set=None) -> Dataset:
    with open(path, encoding="utf-8") as f:
        return load_dataset(f, has_header=has_header, label_set=label_set)


def example_tokens(example: Example) -> list[str]:
    tokens = tokenize(example.text1)
    if example.text2 is not None:
        tokens += [SEP_TOKEN] + tokenize(example.text2)
    return tokens


def prepared_examples(dataset: Dataset) -> list[tuple[list[str], str]]:
    return [(example_tokens(e), e.label) for e in dataset.examples]


class PipelineClassifier(TextClassifier):
    """Encode-then-classify composition over raw token lists."""

    def __init__(self, encoder: Encoder, model: TextClassifier):
        self.encoder = encoder
        self.model = model
        self.classes = model.classes

    def scores(self, tokens: Sequence[str]) -> list[float]:
        return self.model.scores(self.encoder.encode_sentence(tokens))


def build_encoder(
    vocab: Vocabulary,
    surface: AttackSurface,
    gamma: float = 0.3,
    algorithm: str = "agg",
) -> Encoder:
    """Cluster the vocabulary and wrap the result as an encoder.

    ``algorithm`` is "agg" (greedy merging at the given gamma) or "conncomp"
    (connected components of the typo graph, the gamma 0 optimum, recorded
    with gamma 0 in the artifact).
    """
    graph = build_graph(vocab, surface)
    if algorithm == "agg":
        clustering = agglomerative_cluster(vocab, graph, gamma)
    elif algorithm == "conncomp":
        clustering = connected_components(graph)
        gamma = 0.0
    else:
        raise ValueError(f"unknown clustering algorithm {algorithm!r}")
    return Encoder(clustering=clustering, graph=graph, gamma=gamma)


def train_model(
    encoder: Encoder,
    dataset: Dataset,
    l2: float = 1e-4,
    epochs: int = 300,
    learning_rate: float = 0.5,
    seed: int = 0,
) -> BowLinearModel:
    encoded = [
        (encoder.encode_sentence(tokens), label)
        for tokens, label in prepared_examples(dataset)
    ]
    return BowLinearModel.train(
        encoded, l2=l2, epochs=epochs, learning_rate=learning_rate, seed=seed
    )


def _base_report(mode: str, encoder: Encoder, **config) -> dict:
    return {
        "mode": mode,
        "surface": encoder.surface.kind,
        "gamma": encoder.gamma,
        "cap": config.get("cap"),
        "budget": config.get("budget"),
        "width": config.get("width"),
        "seed": config.get("seed"),
    }


def _histogram_json(histogram: dict) -> dict:
    out = {str(k): histogram[k] for k in sorted(k for k in histogram if k != "capped")}
    if "capped" in histogram:
        out["capped"] = histogram["capped"]
    return out


def evaluate(
    mode: str,
    encoder: Encoder,
    model: TextClassifier,
    dataset: Dataset,
    cap: int = DEFAULT_CAP,
    budget: int | None = None,
    width: int = 5,
    seed: int = 0,
) -> dict:
    """Run one evaluation mode and return the report dict.

    Modes: "standard" (clean accuracy), "attack" (beam-search upper bound),
    "robust" (exact worst case over reachable encodings).
    """
    examples = prepared_examples(dataset)
    pipeline_model = PipelineClassifier(encoder, model)
    unknown = sorted({label for _, label in examples} - set(model.classes))
    if unknown:
        raise ValueError(f"dataset labels {unknown} unknown to the model")

    if mode == "standard":
        report = _base_report(mode, encoder, seed=seed)
        per_example = []
        correct = 0
        for idx, (tokens, label) in enumerate(examples):
            pred = pipeline_model.predict(tokens)
            correct += pred == label
            per_example.append({"index": idx, "label": label, "prediction": pred})
        report["accuracy"] = correct / len(examples)
        report["num_examples"] = len(examples)
        report["per_example"] = per_example
        return report

    if mode == "attack":
        config = BeamSearchConfig(surface=encoder.surface, width=width, seed=seed)
        attack = evaluate_attack(pipeline_model, examples, config)
        report = _base_report(mode, encoder, width=width, seed=seed)
        report["accuracy"] = attack.accuracy
        report["num_examples"] = len(examples)
        report["per_example"] = [
            {
                "index": idx,
                "label": label,
                "success": r.success,
                "queries": r.queries,
                "adversarial_text": " ".join(r.adversarial_tokens),
            }
            for idx, ((_, label), r) in enumerate(zip(examples, attack.results))
        ]
        return report

    if mode == "robust":
        rob = robust_accuracy(encoder, model, examples, cap=cap, budget=budget)
        report = _base_report(mode, encoder, cap=cap, budget=budget, seed=seed)
        report["accuracy"] = rob.accuracy
        report["num_examples"] = len(examples)
        report["num_truncated"] = rob.num_truncated
        report["fraction_size_one"] = rob.fraction_size_one
        report["histogram"] = _histogram_json(rob.histogram)
        report["per_example"] = [
            {
                "index": idx,
                "label": label,
                "robust": r.robust,
                "set_size": r.set_size,
                "truncated": r.truncated,
            }
            for idx, ((_, label), r) in enumerate(zip(examples, rob.results))
        ]
        return report

    raise ValueError(f"unknown mode {mode!r}")


def sweep_budget(
    encoder: Encoder,
    model: TextClassifier,
    dataset: Dataset,
    max_budget: int,
    cap: int = DEFAULT_CAP,
    seed: int = 0,
) -> dict:
    """Robust accuracy for every budget 0..max_budget, plus the unlimited value."""
    if max_budget < 0:
        raise ValueError(f"max budget must be >= 0, got {max_budget}")
    examples = prepared_examples(dataset)
    report = _base_report("sweep-budget", encoder, cap=cap, seed=seed)
    del report["budget"]
    report["max_budget"] = max_budget
    report["num_examples"] = len(examples)
    report["accuracies"] = [
        {
            "budget": b,
            "accuracy": robust_accuracy(encoder, model, examples, cap=cap, budget=b).accuracy,
        }
        for b in range(max_budget + 1)
    ]
    report["unlimited_accuracy"] = robust_accuracy(
        encoder, model, examples, cap=cap, budget=None
    ).accuracy
    return report
