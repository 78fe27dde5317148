"""Tests for corpus parsing, synthetic task generators, similarity, and the CLI."""

import json
from collections import Counter

import numpy as np
import pytest
from sklearn.feature_extraction.text import CountVectorizer
from sklearn.linear_model import LogisticRegression

from wavembed.cli import main
from wavembed.data import (
    MARKERS,
    UNK,
    Dataset,
    build_vocab,
    encode_tsv,
    gen_bow_task,
    gen_order_task,
    load_tsv,
    split_pairs,
    tokenize,
    write_tsv,
)
from wavembed.embedding import init_table
from wavembed.errors import ConfigError, DegenerateInputError, ParseError
from wavembed.similarity import ngram_similarity


class TestParsing:
    def test_tokenize_lowercases_and_splits(self):
        assert tokenize("The  Quick\tfox") == ["the", "quick", "fox"]

    def test_build_vocab_first_occurrence_order(self):
        vocab = build_vocab([["b", "a"], ["a", "c"]])
        assert vocab == {UNK: 0, "b": 1, "a": 2, "c": 3}

    def test_single_line(self, tmp_path):
        path = tmp_path / "tiny.tsv"
        path.write_text("1\tgood movie\n", encoding="utf-8")
        ds = load_tsv(path)
        assert ds.vocab == {UNK: 0, "good": 1, "movie": 2}
        assert ds.samples == [([1, 2], 1)]
        assert ds.num_classes == 2

    def test_duplicate_words_map_to_one_entry(self, tmp_path):
        path = tmp_path / "dup.tsv"
        path.write_text("0\tvery very very odd\n", encoding="utf-8")
        ds = load_tsv(path)
        assert ds.samples[0][0] == [1, 1, 1, 2]

    def test_hundred_lines_two_classes(self, tmp_path):
        path = tmp_path / "many.tsv"
        lines = [f"{i % 2}\tword{i} filler\n" for i in range(100)]
        path.write_text("".join(lines), encoding="utf-8")
        ds = load_tsv(path)
        assert len(ds.samples) == 100
        assert ds.num_classes == 2

    def test_missing_tab_names_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("0\tfine text\nno tab here\n", encoding="utf-8")
        with pytest.raises(ParseError, match="line 2"):
            load_tsv(path)

    def test_non_integer_label_names_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("x\tsome text\n", encoding="utf-8")
        with pytest.raises(ParseError, match="line 1"):
            load_tsv(path)

    def test_negative_label_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("-1\tsome text\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_tsv(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.tsv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(DegenerateInputError):
            load_tsv(path)

    def test_encode_with_frozen_vocab_maps_oov_to_unk(self, tmp_path):
        train = tmp_path / "train.tsv"
        train.write_text("0\taa bb\n1\tbb cc\n", encoding="utf-8")
        ds = load_tsv(train)
        test = tmp_path / "test.tsv"
        test.write_text("1\taa zz\n", encoding="utf-8")
        enc = encode_tsv(test, ds.vocab, ds.num_classes)
        assert enc.samples == [([ds.vocab["aa"], 0], 1)]


class TestOrderTask:
    def test_twins_are_adjacent_and_bag_equal(self):
        ds = gen_order_task(seed=2, n_samples=40, sentence_len=8, vocab_size=20)
        inverse = {i: t for t, i in ds.vocab.items()}
        for k in range(0, 40, 2):
            seq0, lab0 = ds.samples[k]
            seq1, lab1 = ds.samples[k + 1]
            assert (lab0, lab1) == (0, 1)
            assert Counter(seq0) == Counter(seq1)
            assert seq0 != seq1
            toks0 = [inverse[j] for j in seq0]
            i = toks0.index(MARKERS[0])
            assert toks0[i : i + 2] == list(MARKERS)

    def test_classes_are_exactly_balanced_with_identical_bags(self):
        ds = gen_order_task(seed=3, n_samples=200, sentence_len=10, vocab_size=30)
        labels = [lab for _, lab in ds.samples]
        assert labels.count(0) == labels.count(1) == 100
        bags = {0: Counter(), 1: Counter()}
        for seq, lab in ds.samples:
            bags[lab].update(seq)
        assert bags[0] == bags[1]

    def test_bow_classifier_cannot_beat_chance_on_paired_split(self):
        ds = gen_order_task(seed=5, n_samples=1200, sentence_len=10, vocab_size=50)
        train_ds, test_ds = split_pairs(ds, 800)
        inverse = {i: t for t, i in ds.vocab.items()}

        def to_text(samples):
            return [" ".join(inverse[j] for j in seq) for seq, _ in samples]

        vectorizer = CountVectorizer(analyzer=str.split)
        x_train = vectorizer.fit_transform(to_text(train_ds.samples))
        x_test = vectorizer.transform(to_text(test_ds.samples))
        y_train = [lab for _, lab in train_ds.samples]
        y_test = [lab for _, lab in test_ds.samples]
        clf = LogisticRegression(max_iter=2000).fit(x_train, y_train)
        assert clf.score(x_test, y_test) <= 0.60

    def test_round_trip_through_tsv(self, tmp_path):
        ds = gen_order_task(seed=4, n_samples=30, sentence_len=6, vocab_size=15)
        path = tmp_path / "task.tsv"
        write_tsv(ds, path)
        back = load_tsv(path)
        assert back.vocab == ds.vocab
        assert back.samples == ds.samples
        assert back.num_classes == ds.num_classes

    def test_split_respects_pair_boundaries(self):
        ds = gen_order_task(seed=6, n_samples=20, sentence_len=6, vocab_size=12)
        train_ds, test_ds = split_pairs(ds, 12)
        assert len(train_ds.samples) == 12 and len(test_ds.samples) == 8
        assert train_ds.samples[-1][1] == 1 and test_ds.samples[0][1] == 0
        with pytest.raises(ConfigError):
            split_pairs(ds, 11)

    def test_parameter_validation(self):
        with pytest.raises(ConfigError):
            gen_order_task(seed=0, n_samples=9, sentence_len=10, vocab_size=50)
        with pytest.raises(ConfigError):
            gen_order_task(seed=0, n_samples=10, sentence_len=3, vocab_size=50)
        with pytest.raises(ConfigError):
            gen_order_task(seed=0, n_samples=10, sentence_len=10, vocab_size=5)


class TestBowTask:
    def test_classes_use_disjoint_marker_pools(self):
        ds = gen_bow_task(seed=1, n_samples=60)
        inverse = {i: t for t, i in ds.vocab.items()}
        for seq, lab in ds.samples:
            toks = [inverse[j] for j in seq]
            own = [t for t in toks if t.startswith("ab"[lab])]
            other = [t for t in toks if t.startswith("ab"[1 - lab])]
            assert len(own) == 2 and not other

    def test_balanced_labels(self):
        ds = gen_bow_task(seed=2, n_samples=100)
        labels = [lab for _, lab in ds.samples]
        assert labels.count(0) == labels.count(1) == 50


class TestDatasetValidation:
    def test_vocab_must_reserve_index_zero_for_unk(self):
        with pytest.raises(ConfigError):
            Dataset([([1], 0)], {"word": 0, UNK: 1}, 2)

    def test_label_outside_num_classes_rejected(self):
        with pytest.raises(ConfigError):
            Dataset([([1], 5)], {UNK: 0, "word": 1}, 2)


class TestSimilarity:
    def test_identical_sentences_have_unit_diagonal(self):
        table = init_table(10, 6, rng=np.random.default_rng(0))
        tokens = [1, 4, 2, 7]
        sim = ngram_similarity(table, tokens, tokens, n=2)
        assert sim.shape == (3, 3)
        np.testing.assert_allclose(np.diag(sim), 1.0, atol=1e-9)

    def test_zero_frequencies_make_windows_position_free(self):
        table = init_table(10, 6, scheme="word_sharing", rng=np.random.default_rng(1))
        table.frequencies[:] = 0.0
        tokens = [3, 5, 8, 2]
        shifted = [9, 3, 5, 8, 2]
        sim = ngram_similarity(table, tokens, shifted, n=3)
        # same trigram content at different offsets stays identical
        assert sim[0, 1] == pytest.approx(1.0, abs=1e-9)

    def test_nonzero_frequencies_separate_swapped_windows(self):
        table = init_table(10, 8, scheme="word_sharing", rng=np.random.default_rng(2))
        zero = init_table(10, 8, scheme="word_sharing", rng=np.random.default_rng(2))
        zero.frequencies[:] = 0.0
        a, b = [1, 2, 5, 6], [2, 1, 5, 6]
        with_freq = ngram_similarity(table, a, b, n=2)
        without = ngram_similarity(zero, a, b, n=2)
        assert without[0, 0] == pytest.approx(1.0, abs=1e-9)
        assert with_freq[0, 0] < 1.0 - 1e-6


class TestCli:
    def _write_corpus(self, tmp_path, name="train.tsv", seed=1, n=60):
        ds = gen_order_task(seed=seed, n_samples=n, sentence_len=6, vocab_size=15)
        path = tmp_path / name
        write_tsv(ds, path)
        return path

    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 2
        capsys.readouterr()

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["verify", "--bogus"]) == 2
        capsys.readouterr()

    def test_gen_data_is_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        for out in (a, b):
            code = main(
                ["gen-data", "--seed", "3", "--samples", "40", "--sentence-len", "6",
                 "--vocab-size", "12", "--out", str(out)]
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()
        capsys.readouterr()

    def test_verify_writes_passing_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["verify", "--seed", "0", "--trials", "40", "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["pass"] is True
        reports = payload["reports"]
        assert len(reports) == 7
        assert all(r["pass"] for r in reports)
        assert all(r["worst_residual"] <= 1e-9 for r in reports)
        capsys.readouterr()

    def test_pe_compare_emits_small_residuals(self, tmp_path, capsys):
        out = tmp_path / "pe.csv"
        code = main(["pe-compare", "--d-model", "16", "--max-pos", "20", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "pos,k,pe_sin,pe_cos,re,im,residual"
        assert len(lines) == 1 + 20 * 8
        worst = max(float(line.rsplit(",", 1)[1]) for line in lines[1:])
        assert worst <= 1e-12
        capsys.readouterr()

    def test_train_eval_round_trip(self, tmp_path, capsys):
        corpus = self._write_corpus(tmp_path)
        model_path = tmp_path / "model.npz"
        code = main(
            ["train", "--data", str(corpus), "--out", str(model_path), "--epochs", "2",
             "--lr", "0.05", "--dim", "4", "--hidden", "6", "--batch", "10", "--seed", "0"]
        )
        assert code == 0
        summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert "train_accuracy" in summary
        assert model_path.exists()
        assert model_path.with_suffix(".vocab.json").exists()

        code = main(["eval", "--model", str(model_path), "--data", str(corpus)])
        assert code == 0
        result = json.loads(capsys.readouterr().out)
        assert 0.0 <= result["accuracy"] <= 1.0

    def test_train_config_file_with_flag_override(self, tmp_path, capsys):
        corpus = self._write_corpus(tmp_path)
        config = tmp_path / "run.json"
        config.write_text(
            json.dumps({"epochs": 1, "lr": 0.05, "dim": 4, "hidden": 6, "batch": 10}),
            encoding="utf-8",
        )
        model_path = tmp_path / "model.npz"
        code = main(
            ["train", "--data", str(corpus), "--config", str(config), "--epochs", "2",
             "--out", str(model_path)]
        )
        assert code == 0
        lines = [json.loads(l) for l in capsys.readouterr().out.strip().splitlines()]
        epochs = [e for e in lines if "epoch" in e]
        assert len(epochs) == 2

    def test_unknown_config_key_is_reported(self, tmp_path, capsys):
        corpus = self._write_corpus(tmp_path)
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"learning_rate": 0.1}), encoding="utf-8")
        code = main(["train", "--data", str(corpus), "--config", str(config)])
        assert code == 2
        assert "learning_rate" in capsys.readouterr().err

    def test_freq_stats_ranks_all_words(self, tmp_path, capsys):
        corpus = self._write_corpus(tmp_path)
        model_path = tmp_path / "model.npz"
        main(
            ["train", "--data", str(corpus), "--out", str(model_path), "--epochs", "1",
             "--lr", "0.05", "--dim", "4", "--hidden", "6", "--scheme", "full"]
        )
        capsys.readouterr()
        code = main(["freq-stats", "--model", str(model_path)])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "rank,word_index,token,delta"
        deltas = [float(line.split(",")[3]) for line in lines[1:]]
        assert deltas == sorted(deltas, reverse=True)

    def test_ngram_sim_diagonal_for_identical_sentences(self, tmp_path, capsys):
        corpus = self._write_corpus(tmp_path)
        model_path = tmp_path / "model.npz"
        main(
            ["train", "--data", str(corpus), "--out", str(model_path), "--epochs", "1",
             "--lr", "0.05", "--dim", "4", "--hidden", "6"]
        )
        capsys.readouterr()
        code = main(
            ["ngram-sim", "--model", str(model_path), "--a", "ma mb f00", "--b", "ma mb f00",
             "-n", "2"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "a_window,b_window,similarity"
        diag = [float(l.split(",")[2]) for l in lines[1:] if l.split(",")[0] == l.split(",")[1]]
        assert all(abs(v - 1.0) <= 1e-9 for v in diag)

    def test_missing_data_file_is_runtime_error(self, tmp_path, capsys):
        code = main(["eval", "--model", str(tmp_path / "no.npz"), "--data", str(tmp_path / "no.tsv")])
        assert code == 2
        capsys.readouterr()
