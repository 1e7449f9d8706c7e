"""Command line interface.

Subcommands: build-clusters, encode, train, eval, attack, sweep-budget.
Reports are JSON on stdout unless --out is given; artifact files are written
with fixed formatting so identical inputs and seeds produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .attacker import BeamSearchConfig, evaluate_attack
from .certifier import DEFAULT_CAP
from .encoder import load_encoder_file, save_encoder_file
from .lexicon import load_vocabulary_file
from .model import BowLinearModel
from .perturbation import get_surface
from .pipeline import (
    PipelineClassifier,
    build_encoder,
    evaluate,
    load_dataset_file,
    prepared_examples,
    sweep_budget,
    train_model,
)

DEFAULT_MAX_VOCAB = 100000


def _add_vocab_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vocab", required=True, help="word<TAB>count frequency file")
    p.add_argument(
        "--max-vocab",
        type=int,
        default=DEFAULT_MAX_VOCAB,
        help=f"keep the N most frequent words (default {DEFAULT_MAX_VOCAB})",
    )


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="label<TAB>text1[<TAB>text2] file")
    p.add_argument("--has-header", action="store_true", help="skip the first dataset line")


def _add_eval_args(p: argparse.ArgumentParser) -> None:
    _add_vocab_args(p)
    _add_dataset_args(p)
    p.add_argument("--encoder", required=True, help="encoder artifact path")
    p.add_argument("--model", required=True, help="model artifact path")
    p.add_argument("--surface", choices=["ed1", "intperm"], default=None,
                   help="override the artifact's surface (must match a rebuildable one)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help=f"max encodings to enumerate per example (default {DEFAULT_CAP})")
    p.add_argument("--budget", type=int, default=None,
                   help="max perturbed positions per example (default unlimited)")
    p.add_argument("--width", type=int, default=5, help="beam width (default 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="report path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typoguard",
        description="Typo-robust token encodings: build, train, attack, certify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-clusters", help="cluster the vocabulary and save an encoder")
    _add_vocab_args(p)
    p.add_argument("--surface", choices=["ed1", "intperm"], default="ed1")
    p.add_argument("--gamma", type=float, default=0.3,
                   help="fidelity weight in [0,1] (default 0.3)")
    p.add_argument("--algorithm", choices=["agg", "conncomp"], default="agg")
    p.add_argument("--out", required=True, help="encoder artifact path")

    p = sub.add_parser("encode", help="encode a dataset through a saved encoder")
    _add_vocab_args(p)
    _add_dataset_args(p)
    p.add_argument("--encoder", required=True)
    p.add_argument("--out", default=None, help="encoded TSV path (default stdout)")

    p = sub.add_parser("train", help="train the bundled linear model on encoded text")
    _add_vocab_args(p)
    _add_dataset_args(p)
    p.add_argument("--encoder", required=True)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model artifact path")

    p = sub.add_parser("eval", help="evaluate standard, attack, or robust accuracy")
    p.add_argument("--mode", choices=["standard", "attack", "robust"], required=True)
    _add_eval_args(p)

    p = sub.add_parser("attack", help="beam-search attack (eval --mode attack)")
    _add_eval_args(p)
    p.add_argument("--transcript", default=None,
                   help="write per-example attack records as JSON lines")

    p = sub.add_parser("sweep-budget", help="robust accuracy for budgets 0..max-b")
    p.add_argument("--max-b", type=int, required=True)
    _add_eval_args(p)

    return parser


def _emit(report: dict, out_path: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _load_eval_inputs(args):
    vocab = load_vocabulary_file(args.vocab, args.max_vocab)
    surface = get_surface(args.surface) if args.surface else None
    encoder = load_encoder_file(args.encoder, vocab, surface)
    model = BowLinearModel.load_file(args.model)
    dataset = load_dataset_file(
        args.dataset, has_header=args.has_header, label_set=model.classes
    )
    return encoder, model, dataset


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "build-clusters":
        vocab = load_vocabulary_file(args.vocab, args.max_vocab)
        encoder = build_encoder(
            vocab, get_surface(args.surface), gamma=args.gamma, algorithm=args.algorithm
        )
        save_encoder_file(encoder, args.out)
        return 0

    if args.command == "encode":
        vocab = load_vocabulary_file(args.vocab, args.max_vocab)
        encoder = load_encoder_file(args.encoder, vocab)
        dataset = load_dataset_file(args.dataset, has_header=args.has_header)
        lines = []
        for e in dataset.examples:
            fields = [e.label, " ".join(encoder.encode_text(e.text1))]
            if e.text2 is not None:
                fields.append(" ".join(encoder.encode_text(e.text2)))
            lines.append("\t".join(fields) + "\n")
        if args.out is None:
            sys.stdout.write("".join(lines))
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as f:
                f.write("".join(lines))
        return 0

    if args.command == "train":
        vocab = load_vocabulary_file(args.vocab, args.max_vocab)
        encoder = load_encoder_file(args.encoder, vocab)
        dataset = load_dataset_file(args.dataset, has_header=args.has_header)
        model = train_model(
            encoder,
            dataset,
            l2=args.l2,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed,
        )
        model.save_file(args.out)
        return 0

    if args.command == "eval":
        encoder, model, dataset = _load_eval_inputs(args)
        report = evaluate(
            args.mode, encoder, model, dataset,
            cap=args.cap, budget=args.budget, width=args.width, seed=args.seed,
        )
        _emit(report, args.out)
        return 0

    if args.command == "attack":
        encoder, model, dataset = _load_eval_inputs(args)
        report = evaluate(
            "attack", encoder, model, dataset,
            cap=args.cap, budget=args.budget, width=args.width, seed=args.seed,
        )
        if args.transcript:
            examples = prepared_examples(dataset)
            config = BeamSearchConfig(surface=encoder.surface, width=args.width, seed=args.seed)
            attack = evaluate_attack(PipelineClassifier(encoder, model), examples, config)
            with open(args.transcript, "w", encoding="utf-8", newline="\n") as f:
                for idx, ((tokens, label), r) in enumerate(zip(examples, attack.results)):
                    f.write(json.dumps({
                        "index": idx,
                        "label": label,
                        "original_tokens": list(tokens),
                        "adversarial_tokens": list(r.adversarial_tokens),
                        "success": r.success,
                        "queries": r.queries,
                    }) + "\n")
        _emit(report, args.out)
        return 0

    if args.command == "sweep-budget":
        encoder, model, dataset = _load_eval_inputs(args)
        report = sweep_budget(
            encoder, model, dataset, max_budget=args.max_b, cap=args.cap, seed=args.seed
        )
        _emit(report, args.out)
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    try:
        sys.exit(run())
    except (ValueError, OSError) as err:
        print(f"typoguard: error: {err}", file=sys.stderr)
        sys.exit(2)


if __name__ == "__main__":
    main()
