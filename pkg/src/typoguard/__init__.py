"""Typo-robust token encodings with exact robustness certification.

Build a clustering of a frequency-ranked vocabulary so that words sharing
typos share an encoded token, train any classifier on the encoded text, and
then certify worst-case accuracy exactly by enumerating the (small) set of
encodings an adversarial typist can reach.
"""

from .attacker import (
    AttackReport,
    AttackResult,
    BeamSearchConfig,
    attack_accuracy,
    beam_attack,
    evaluate_attack,
    restricted_candidates,
)
from .certifier import (
    DEFAULT_CAP,
    CertificationResult,
    EncodingSet,
    RobustnessReport,
    certify_example,
    reachable_encodings,
    reachable_tokens,
    robust_accuracy,
)
from .clustering import (
    Clustering,
    MergeStep,
    ObjectiveValue,
    agglomerative_cluster,
    combined_cost,
    fidelity_cost,
    stability_cost,
)
from .encoder import (
    MASK_TOKEN,
    SEP_TOKEN,
    Encoder,
    load_encoder,
    load_encoder_file,
    save_encoder,
    save_encoder_file,
    tokenize,
)
from .lexicon import Vocabulary, load_vocabulary, load_vocabulary_file
from .model import BowLinearModel, TextClassifier, token_features
from .perturbation import (
    AttackSurface,
    Ed1Surface,
    InternalPermutationSurface,
    get_surface,
    signature,
)
from .pipeline import (
    Dataset,
    Example,
    PipelineClassifier,
    build_encoder,
    evaluate,
    example_tokens,
    load_dataset,
    load_dataset_file,
    prepared_examples,
    sweep_budget,
    train_model,
)
from .typo_graph import TypoGraph, build_graph, connected_components, resolve_typo

__version__ = "0.1.0"

__all__ = [
    "AttackReport",
    "AttackResult",
    "AttackSurface",
    "BeamSearchConfig",
    "BowLinearModel",
    "CertificationResult",
    "Clustering",
    "DEFAULT_CAP",
    "Dataset",
    "Ed1Surface",
    "Encoder",
    "EncodingSet",
    "Example",
    "InternalPermutationSurface",
    "MASK_TOKEN",
    "MergeStep",
    "ObjectiveValue",
    "PipelineClassifier",
    "RobustnessReport",
    "SEP_TOKEN",
    "TextClassifier",
    "TypoGraph",
    "Vocabulary",
    "agglomerative_cluster",
    "attack_accuracy",
    "beam_attack",
    "build_encoder",
    "build_graph",
    "certify_example",
    "combined_cost",
    "connected_components",
    "evaluate",
    "evaluate_attack",
    "example_tokens",
    "fidelity_cost",
    "get_surface",
    "load_dataset",
    "load_dataset_file",
    "load_encoder",
    "load_encoder_file",
    "load_vocabulary",
    "load_vocabulary_file",
    "prepared_examples",
    "reachable_encodings",
    "reachable_tokens",
    "resolve_typo",
    "restricted_candidates",
    "robust_accuracy",
    "save_encoder",
    "save_encoder_file",
    "signature",
    "stability_cost",
    "sweep_budget",
    "token_features",
    "tokenize",
    "train_model",
]
