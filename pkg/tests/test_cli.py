"""End-to-end command line flows, artifact identity, and exit codes."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from typoguard.cli import run

from conftest import dataset_lines, make_dataset, make_vocab, make_vocab_lines


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    lines = make_vocab_lines(150, seed=19, alphabet="abcde", min_len=2, max_len=5)
    (root / "vocab.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    vocab = make_vocab(150, seed=19, alphabet="abcde", min_len=2, max_len=5)
    train = make_dataset(vocab, num_examples=60, seed=101)
    test = make_dataset(vocab, num_examples=24, seed=102)
    (root / "train.tsv").write_text(
        "\n".join(dataset_lines(train)) + "\n", encoding="utf-8"
    )
    (root / "test.tsv").write_text(
        "\n".join(dataset_lines(test)) + "\n", encoding="utf-8"
    )
    return root


def cli(*args) -> int:
    return run([str(a) for a in args])


def test_build_gamma_zero_matches_conncomp_artifact(workdir):
    vocab = workdir / "vocab.tsv"
    assert cli("build-clusters", "--vocab", vocab, "--surface", "ed1",
               "--gamma", "0", "--out", workdir / "enc_gamma0.txt") == 0
    assert cli("build-clusters", "--vocab", vocab, "--surface", "ed1",
               "--algorithm", "conncomp", "--out", workdir / "enc_cc.txt") == 0
    assert (workdir / "enc_gamma0.txt").read_bytes() == (
        workdir / "enc_cc.txt"
    ).read_bytes()


@pytest.fixture(scope="module")
def artifacts(workdir):
    vocab = workdir / "vocab.tsv"
    encoder = workdir / "encoder.txt"
    model = workdir / "model.json"
    assert cli("build-clusters", "--vocab", vocab, "--surface", "ed1",
               "--gamma", "0.3", "--out", encoder) == 0
    assert cli("train", "--vocab", vocab, "--encoder", encoder,
               "--dataset", workdir / "train.tsv", "--epochs", "150",
               "--seed", "0", "--out", model) == 0
    return {"vocab": vocab, "encoder": encoder, "model": model}


def test_encode_writes_tsv(workdir, artifacts):
    out = workdir / "encoded.tsv"
    assert cli("encode", "--vocab", artifacts["vocab"], "--encoder",
               artifacts["encoder"], "--dataset", workdir / "test.tsv",
               "--out", out) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 24
    assert all(len(line.split("\t")) == 2 for line in lines)


def test_eval_modes_and_ordering(workdir, artifacts):
    reports = {}
    for mode in ("standard", "attack", "robust"):
        out = workdir / f"report_{mode}.json"
        assert cli("eval", "--mode", mode, "--vocab", artifacts["vocab"],
                   "--encoder", artifacts["encoder"], "--model", artifacts["model"],
                   "--dataset", workdir / "test.tsv", "--cap", "2000",
                   "--seed", "7", "--out", out) == 0
        reports[mode] = json.loads(out.read_text(encoding="utf-8"))
    assert (
        reports["robust"]["accuracy"]
        <= reports["attack"]["accuracy"]
        <= reports["standard"]["accuracy"]
    )
    robust = reports["robust"]
    assert sum(robust["histogram"].values()) == robust["num_examples"]
    assert robust["surface"] == "ed1" and robust["gamma"] == 0.3


def test_eval_to_stdout(workdir, artifacts, capsys):
    assert cli("eval", "--mode", "standard", "--vocab", artifacts["vocab"],
               "--encoder", artifacts["encoder"], "--model", artifacts["model"],
               "--dataset", workdir / "test.tsv") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "standard"


def test_sweep_budget_non_increasing(workdir, artifacts):
    out = workdir / "sweep.json"
    assert cli("sweep-budget", "--max-b", "3", "--vocab", artifacts["vocab"],
               "--encoder", artifacts["encoder"], "--model", artifacts["model"],
               "--dataset", workdir / "test.tsv", "--cap", "2000", "--out", out) == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    accuracies = [row["accuracy"] for row in report["accuracies"]]
    assert all(b <= a for a, b in zip(accuracies, accuracies[1:]))


def test_attack_transcript(workdir, artifacts):
    transcript = workdir / "attack.jsonl"
    assert cli("attack", "--vocab", artifacts["vocab"], "--encoder",
               artifacts["encoder"], "--model", artifacts["model"],
               "--dataset", workdir / "test.tsv", "--seed", "3",
               "--transcript", transcript, "--out", workdir / "attack.json") == 0
    from typoguard import get_surface

    surface = get_surface("ed1")
    records = [json.loads(line) for line in transcript.read_text().splitlines()]
    assert len(records) == 24
    for record in records:
        for original, adversarial in zip(
            record["original_tokens"], record["adversarial_tokens"]
        ):
            assert surface.is_perturbation(original, adversarial)


def test_full_pipeline_is_byte_deterministic(workdir, tmp_path_factory):
    vocab = workdir / "vocab.tsv"
    outputs = []
    for run_dir in (tmp_path_factory.mktemp("run_a"), tmp_path_factory.mktemp("run_b")):
        encoder = run_dir / "encoder.txt"
        model = run_dir / "model.json"
        report = run_dir / "robust.json"
        attack = run_dir / "attack.json"
        assert cli("build-clusters", "--vocab", vocab, "--gamma", "0.3",
                   "--out", encoder) == 0
        assert cli("train", "--vocab", vocab, "--encoder", encoder,
                   "--dataset", workdir / "train.tsv", "--epochs", "120",
                   "--seed", "5", "--out", model) == 0
        assert cli("eval", "--mode", "robust", "--vocab", vocab,
                   "--encoder", encoder, "--model", model,
                   "--dataset", workdir / "test.tsv", "--cap", "2000",
                   "--seed", "5", "--out", report) == 0
        assert cli("eval", "--mode", "attack", "--vocab", vocab,
                   "--encoder", encoder, "--model", model,
                   "--dataset", workdir / "test.tsv", "--seed", "5",
                   "--out", attack) == 0
        outputs.append(
            tuple(p.read_bytes() for p in (encoder, model, report, attack))
        )
    assert outputs[0] == outputs[1]


def test_intperm_surface_via_cli(workdir):
    vocab = workdir / "vocab.tsv"
    out = workdir / "enc_intperm.txt"
    assert cli("build-clusters", "--vocab", vocab, "--surface", "intperm",
               "--algorithm", "conncomp", "--out", out) == 0
    header = out.read_text(encoding="utf-8").splitlines()[0]
    assert "surface=intperm" in header


def test_intperm_conncomp_robust_eval_equals_standard(workdir):
    vocab = workdir / "vocab.tsv"
    encoder = workdir / "enc_intperm_cc.txt"
    model = workdir / "model_intperm.json"
    assert cli("build-clusters", "--vocab", vocab, "--surface", "intperm",
               "--algorithm", "conncomp", "--out", encoder) == 0
    assert cli("train", "--vocab", vocab, "--encoder", encoder,
               "--dataset", workdir / "train.tsv", "--epochs", "100",
               "--out", model) == 0
    reports = {}
    for mode in ("standard", "robust"):
        out = workdir / f"intperm_{mode}.json"
        assert cli("eval", "--mode", mode, "--surface", "intperm",
                   "--vocab", vocab, "--encoder", encoder, "--model", model,
                   "--dataset", workdir / "test.tsv", "--out", out) == 0
        reports[mode] = json.loads(out.read_text(encoding="utf-8"))
    assert reports["robust"]["accuracy"] == reports["standard"]["accuracy"]
    assert reports["robust"]["fraction_size_one"] == 1.0


def test_cli_error_exit_codes(workdir, artifacts):
    proc = subprocess.run(
        [sys.executable, "-m", "typoguard.cli", "eval", "--mode", "standard",
         "--vocab", str(workdir / "missing.tsv"),
         "--encoder", str(artifacts["encoder"]),
         "--model", str(artifacts["model"]),
         "--dataset", str(workdir / "test.tsv")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "error" in proc.stderr

    # vocabulary mismatch between artifact and a freshly truncated vocab
    small = workdir / "vocab_small.tsv"
    small.write_text("aa\t5\nbb\t3\n", encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "typoguard.cli", "eval", "--mode", "robust",
         "--vocab", str(small), "--encoder", str(artifacts["encoder"]),
         "--model", str(artifacts["model"]),
         "--dataset", str(workdir / "test.tsv")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "checksum" in proc.stderr


def test_console_script_help():
    proc = subprocess.run(
        [sys.executable, "-m", "typoguard.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "build-clusters" in proc.stdout
