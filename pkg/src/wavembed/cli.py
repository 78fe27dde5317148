"""Command-line interface: train, eval, verify, pe-compare, freq-stats, ngram-sim, gen-data."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .closed_form import run_verification
from .config import config_from_dict, load_config
from .data import encode_tsv, gen_order_task, load_tsv, tokenize, write_tsv
from .embedding import frequency_sensitivity
from .errors import (ConfigError, DegenerateInputError, ParseError,
                     PreconditionError, ShapeError)
from .model import build_model, count_parameters, evaluate, load_model, save_model
from .similarity import ngram_similarity
from .sinusoid import bijection_check, complex_pe, sinusoidal_pe
from .train import train


def _vocab_path(model_path) -> Path:
    return Path(model_path).with_suffix(".vocab.json")


def _load_vocab(model_path) -> dict | None:
    path = _vocab_path(model_path)
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_rows(rows, out_path) -> None:
    if out_path is None:
        csv.writer(sys.stdout).writerows(rows)
        return
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(rows)


def cmd_train(args) -> int:
    values = {}
    if args.config:
        values.update(vars(load_config(args.config)))
    overrides = {key: getattr(args, key) for key in
                 ("encoder", "scheme", "phase_mode", "dim", "hidden", "activation",
                  "lr", "lr_freq_multiplier", "momentum", "batch", "epochs", "l2",
                  "seed", "data", "test_data", "out")
                 if getattr(args, key) is not None}
    if args.freeze_frequencies:
        overrides["train_frequencies"] = False
    values.update(overrides)
    cfg = config_from_dict(values)
    if cfg.data is None:
        print("error: train needs --data (or a config with a data path)", file=sys.stderr)
        return 2
    dataset = load_tsv(cfg.data)
    test = encode_tsv(cfg.test_data, dataset.vocab, dataset.num_classes) \
        if cfg.test_data else None
    rng = np.random.default_rng(cfg.seed)
    model = build_model(
        len(dataset.vocab), dataset.num_classes, rng, encoder=cfg.encoder,
        dim=cfg.dim, hidden=cfg.hidden, scheme=cfg.scheme,
        phase_mode=cfg.phase_mode, activation=cfg.activation,
        conv_width=cfg.conv_width, conv_filters=cfg.conv_filters,
        attention_norm=cfg.attention_norm, share_real_imag=cfg.share_real_imag,
        train_frequencies=cfg.train_frequencies)
    metrics = train(
        model, dataset.samples, epochs=cfg.epochs, lr=cfg.lr,
        batch_size=cfg.batch, lr_freq_multiplier=cfg.lr_freq_multiplier,
        momentum=cfg.momentum, l2=cfg.l2, seed=cfg.seed,
        test_samples=test.samples if test else None,
        log=lambda entry: print(json.dumps(entry)))
    print(json.dumps({"train_accuracy": metrics.train_accuracy,
                      "test_accuracy": metrics.test_accuracy,
                      "wall_time": round(metrics.wall_time, 3),
                      "parameters": count_parameters(model)}))
    if cfg.out:
        save_model(model, cfg.out)
        with open(_vocab_path(cfg.out), "w", encoding="utf-8") as fh:
            json.dump(dataset.vocab, fh)
    return 0


def cmd_eval(args) -> int:
    model = load_model(args.model)
    vocab = _load_vocab(args.model)
    if vocab is None:
        print(f"error: no vocabulary file at {_vocab_path(args.model)}", file=sys.stderr)
        return 2
    dataset = encode_tsv(args.data, vocab, model.num_classes)
    accuracy = evaluate(model, dataset.samples)
    print(json.dumps({"accuracy": accuracy, "samples": len(dataset.samples)}))
    return 0


def cmd_verify(args) -> int:
    reports = run_verification(seed=args.seed or 0, trials=args.trials)
    passed = all(r.passed for r in reports)
    payload = {"reports": [r.to_dict() for r in reports], "pass": passed}
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0 if passed else 1


def cmd_pe_compare(args) -> int:
    report = bijection_check(args.max_pos, args.d_model)
    rows = [["pos", "k", "pe_sin", "pe_cos", "re", "im", "residual"]]
    for pos in range(args.max_pos):
        pe = sinusoidal_pe(pos, args.d_model)
        for k in range(args.d_model // 2):
            z = complex_pe(pos, k, args.d_model)
            residual = max(abs(pe[2 * k] - z.imag), abs(pe[2 * k + 1] - z.real))
            rows.append([pos, k, repr(float(pe[2 * k])), repr(float(pe[2 * k + 1])),
                         repr(z.real), repr(z.imag), repr(float(residual))])
    _write_rows(rows, args.out)
    if args.out:
        print(report.to_json())
    return 0 if report.passed else 1


def cmd_freq_stats(args) -> int:
    model = load_model(args.model)
    vocab = _load_vocab(args.model) or {}
    inverse = {i: tok for tok, i in vocab.items()}
    profile = frequency_sensitivity(model.table)
    rows = [["rank", "word_index", "token", "delta"]]
    for rank, j in enumerate(profile.ranking):
        rows.append([rank, int(j), inverse.get(int(j), ""), repr(float(profile.delta[j]))])
    _write_rows(rows, args.out)
    return 0


def cmd_ngram_sim(args) -> int:
    model = load_model(args.model)
    vocab = _load_vocab(args.model)
    if vocab is None:
        print(f"error: no vocabulary file at {_vocab_path(args.model)}", file=sys.stderr)
        return 2
    tokens_a = [vocab.get(t, 0) for t in tokenize(args.a)]
    tokens_b = [vocab.get(t, 0) for t in tokenize(args.b)]
    matrix = ngram_similarity(model.table, tokens_a, tokens_b, args.n)
    rows = [["a_window", "b_window", "similarity"]]
    for s in range(matrix.shape[0]):
        for t in range(matrix.shape[1]):
            rows.append([s, t, repr(float(matrix[s, t]))])
    _write_rows(rows, args.out)
    return 0


def cmd_gen_data(args) -> int:
    dataset = gen_order_task(args.seed or 0, args.samples, args.sentence_len,
                             args.vocab_size)
    write_tsv(dataset, args.out)
    print(json.dumps({"samples": len(dataset.samples), "vocab": len(dataset.vocab),
                      "classes": dataset.num_classes, "out": str(args.out)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavembed",
        description="Order-aware complex-valued word embeddings: training, "
                    "verification, and dataset tooling.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a classifier on a TSV corpus")
    p.add_argument("--data", help="training TSV (label<TAB>text per line)")
    p.add_argument("--test-data", help="held-out TSV encoded with the training vocabulary")
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--out", help="write the trained model (.npz) and vocabulary here")
    p.add_argument("--seed", type=int)
    p.add_argument("--encoder", choices=["fasttext", "cnn", "rnn", "attention"])
    p.add_argument("--scheme", choices=["full", "word_sharing", "dimension_sharing"])
    p.add_argument("--phase-mode", dest="phase_mode", choices=["constant", "full"])
    p.add_argument("--activation", choices=["identity", "sigmoid", "tanh", "relu"])
    p.add_argument("--dim", type=int)
    p.add_argument("--hidden", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--lr-freq-multiplier", dest="lr_freq_multiplier", type=float)
    p.add_argument("--momentum", type=float)
    p.add_argument("--batch", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--l2", type=float)
    p.add_argument("--freeze-frequencies", action="store_true",
                   help="keep frequencies fixed at their initial values")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved model on a TSV corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the closed-form property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pe-compare",
                       help="compare sinusoidal encodings with their complex form")
    p.add_argument("--d-model", dest="d_model", type=int, default=512)
    p.add_argument("--max-pos", dest="max_pos", type=int, default=100)
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_pe_compare)

    p = sub.add_parser("freq-stats",
                       help="per-word mean absolute frequency, descending")
    p.add_argument("--model", required=True)
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_freq_stats)

    p = sub.add_parser("ngram-sim", help="sliding n-gram cosine similarity matrix")
    p.add_argument("--model", required=True)
    p.add_argument("--a", required=True, help="first sentence")
    p.add_argument("--b", required=True, help="second sentence")
    p.add_argument("-n", type=int, default=2, help="n-gram width")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_ngram_sim)

    p = sub.add_parser("gen-data", help="write a synthetic order-task TSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--sentence-len", dest="sentence_len", type=int, default=10)
    p.add_argument("--vocab-size", dest="vocab_size", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_data)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ConfigError, ParseError, DegenerateInputError, PreconditionError,
            ShapeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
