"""Tests for the complex sequence encoders' building blocks."""

import math

import numpy as np
import pytest

from wavembed.cplx import ComplexArray, complex_dense, modulus_vec, split_activation
from wavembed.embedding import embed_sequence, init_table
from wavembed.errors import DegenerateInputError, PreconditionError, ShapeError
from wavembed.layers import (
    AttentionWeights,
    RnnCell,
    attention_energy,
    attention_output,
    attention_parameter_count,
    attention_weights_row,
    complex_conv1d,
    fasttext_pool,
    init_attention,
    max_pool_modulus,
    modulus_readout,
    rnn_step,
)


def _rand_carray(rng, shape):
    return ComplexArray(re=rng.normal(size=shape), im=rng.normal(size=shape))


def _rotate(x, phi):
    c, s = math.cos(phi), math.sin(phi)
    return ComplexArray(re=x.re * c - x.im * s, im=x.re * s + x.im * c)


class TestFasttextPool:
    def test_single_row_is_identity(self):
        rng = np.random.default_rng(0)
        rows = _rand_carray(rng, (1, 4))
        out = fasttext_pool(rows)
        np.testing.assert_array_equal(out.re, rows.re[0])
        np.testing.assert_array_equal(out.im, rows.im[0])

    def test_conjugate_pair_sums_to_real(self):
        re = np.array([[1.0, 2.0], [1.0, 2.0]])
        im = np.array([[0.5, -0.3], [-0.5, 0.3]])
        out = fasttext_pool(ComplexArray(re, im))
        np.testing.assert_array_equal(out.im, [0.0, 0.0])
        np.testing.assert_array_equal(out.re, [2.0, 4.0])

    def test_matches_row_accumulation(self):
        rng = np.random.default_rng(1)
        rows = _rand_carray(rng, (6, 3))
        want = rows.to_complex().sum(axis=0)
        out = fasttext_pool(rows)
        np.testing.assert_allclose(out.to_complex(), want, atol=1e-12)
        mean = fasttext_pool(rows, mean=True)
        np.testing.assert_allclose(mean.to_complex(), want / 6.0, atol=1e-12)

    def test_empty_sequence_rejected(self):
        with pytest.raises(DegenerateInputError):
            fasttext_pool(ComplexArray(np.zeros((0, 3)), np.zeros((0, 3))))


class TestConv1d:
    def test_width_one_identity_kernel_reproduces_input(self):
        rng = np.random.default_rng(2)
        seq = _rand_carray(rng, (5, 3))
        weights = ComplexArray(np.eye(3), np.zeros((3, 3)))
        bias = ComplexArray(np.zeros(3), np.zeros(3))
        out = complex_conv1d(seq, weights, width=1, bias=bias)
        np.testing.assert_allclose(out.re, seq.re, atol=1e-15)
        np.testing.assert_allclose(out.im, seq.im, atol=1e-15)

    def test_zero_input_broadcasts_bias(self):
        rng = np.random.default_rng(3)
        weights = _rand_carray(rng, (4, 6))
        bias = _rand_carray(rng, (4,))
        seq = ComplexArray(np.zeros((5, 2)), np.zeros((5, 2)))
        out = complex_conv1d(seq, weights, width=3, bias=bias)
        assert out.shape == (3, 4)
        for i in range(3):
            np.testing.assert_allclose(out.re[i], bias.re, atol=1e-15)
            np.testing.assert_allclose(out.im[i], bias.im, atol=1e-15)

    def test_matches_per_window_dense_oracle(self):
        rng = np.random.default_rng(4)
        seq = _rand_carray(rng, (7, 2))
        weights = _rand_carray(rng, (3, 6))
        bias = _rand_carray(rng, (3,))
        out = complex_conv1d(seq, weights, width=3, bias=bias)
        assert out.shape == (5, 3)
        for s in range(5):
            window = ComplexArray(seq.re[s : s + 3].ravel(), seq.im[s : s + 3].ravel())
            want = complex_dense(window, weights, bias)
            np.testing.assert_allclose(out.re[s], want.re, atol=1e-12)
            np.testing.assert_allclose(out.im[s], want.im, atol=1e-12)

    def test_window_wider_than_sequence_rejected(self):
        rng = np.random.default_rng(5)
        seq = _rand_carray(rng, (2, 2))
        weights = _rand_carray(rng, (1, 6))
        bias = _rand_carray(rng, (1,))
        with pytest.raises(ShapeError):
            complex_conv1d(seq, weights, width=3, bias=bias)


class TestMaxPool:
    def test_selects_largest_modulus_per_channel(self):
        re = np.array([[3.0, 0.1], [0.0, -2.0], [1.0, 1.0]])
        im = np.array([[4.0, 0.0], [1.0, 0.5], [0.0, 0.0]])
        out = max_pool_modulus(ComplexArray(re, im))
        np.testing.assert_array_equal(out.re, [3.0, -2.0])
        np.testing.assert_array_equal(out.im, [4.0, 0.5])

    def test_pool_modulus_dominates_every_row(self):
        rng = np.random.default_rng(6)
        seq = _rand_carray(rng, (9, 4))
        pooled = modulus_vec(max_pool_modulus(seq))
        np.testing.assert_allclose(pooled, modulus_vec(seq).max(axis=0), atol=1e-12)


class TestRnn:
    def _cell(self, rng, h, d):
        return RnnCell(
            wh=_rand_carray(rng, (h, h)), wz=_rand_carray(rng, (h, d)), b=_rand_carray(rng, (h,))
        )

    def test_matches_scalar_complex_oracle(self):
        rng = np.random.default_rng(7)
        cell = self._cell(rng, 3, 2)
        h = _rand_carray(rng, (3,))
        z = _rand_carray(rng, (2,))
        pre = (
            cell.wh.to_complex() @ h.to_complex()
            + cell.wz.to_complex() @ z.to_complex()
            + cell.b.to_complex()
        )
        want = split_activation(ComplexArray.from_complex(pre), "tanh")
        got = rnn_step(cell, h, z, act="tanh")
        np.testing.assert_allclose(got.re, want.re, atol=1e-12)
        np.testing.assert_allclose(got.im, want.im, atol=1e-12)

    def test_zero_state_zero_input_gives_activated_bias(self):
        rng = np.random.default_rng(8)
        cell = self._cell(rng, 3, 2)
        out = rnn_step(
            cell, ComplexArray(np.zeros(3), np.zeros(3)), ComplexArray(np.zeros(2), np.zeros(2))
        )
        want = split_activation(cell.b, "tanh")
        np.testing.assert_allclose(out.re, want.re, atol=1e-15)
        np.testing.assert_allclose(out.im, want.im, atol=1e-15)

    def test_non_square_state_matrix_rejected(self):
        rng = np.random.default_rng(9)
        with pytest.raises(ShapeError):
            RnnCell(
                wh=_rand_carray(rng, (3, 2)),
                wz=_rand_carray(rng, (3, 2)),
                b=_rand_carray(rng, (3,)),
            )

    def test_mismatched_input_dim_rejected(self):
        rng = np.random.default_rng(10)
        cell = self._cell(rng, 3, 2)
        with pytest.raises(ShapeError):
            rnn_step(cell, _rand_carray(rng, (3,)), _rand_carray(rng, (4,)))


class TestAttention:
    def test_identity_projections_basis_vector(self):
        eye = ComplexArray(np.eye(4), np.zeros((4, 4)))
        weights = AttentionWeights(wq=eye, wk=eye, wv=eye)
        e0 = ComplexArray(np.eye(4)[0], np.zeros(4))
        # z = 1, n = 4 -> sqrt(1/4)
        assert attention_energy(e0, e0, weights, n=4) == pytest.approx(0.5, abs=1e-15)

    def test_purely_imaginary_score_contributes_fully(self):
        eye = ComplexArray(np.eye(2), np.zeros((2, 2)))
        weights = AttentionWeights(wq=eye, wk=eye, wv=eye)
        wi = ComplexArray(np.array([1.0, 0.0]), np.zeros(2))
        wj = ComplexArray(np.zeros(2), np.array([1.0, 0.0]))
        # z = wi . conj(wj) = -i has |z| = 1
        assert attention_energy(wi, wj, weights, n=1) == pytest.approx(1.0, abs=1e-15)

    def test_energy_matches_builtin_complex_oracle(self):
        rng = np.random.default_rng(11)
        weights = init_attention(3, rng)
        for _ in range(10):
            wi = _rand_carray(rng, (3,))
            wj = _rand_carray(rng, (3,))
            q = wi.to_complex() @ weights.wq.to_complex()
            k = wj.to_complex() @ weights.wk.to_complex()
            z = np.sum(q * np.conj(k))
            want = math.sqrt((z.real**2 + z.imag**2) / 5)
            assert attention_energy(wi, wj, weights, n=5) == pytest.approx(want, abs=1e-12)

    def test_energy_is_global_phase_invariant(self):
        rng = np.random.default_rng(12)
        weights = init_attention(4, rng)
        wi = _rand_carray(rng, (4,))
        wj = _rand_carray(rng, (4,))
        base = attention_energy(wi, wj, weights, n=3)
        for phi in rng.uniform(0.0, 2.0 * math.pi, 8):
            rotated = attention_energy(_rotate(wi, phi), _rotate(wj, phi), weights, n=3)
            assert rotated == pytest.approx(base, abs=1e-9)

    def test_softmax_row_of_equal_energies_is_uniform(self):
        row = attention_weights_row(np.full(4, 1.7))
        np.testing.assert_allclose(row, 0.25, atol=1e-15)

    def test_softmax_matches_direct_exponential(self):
        rng = np.random.default_rng(13)
        e = rng.uniform(0.0, 3.0, 6)
        want = np.exp(e) / np.exp(e).sum()
        np.testing.assert_allclose(attention_weights_row(e), want, atol=1e-12)

    def test_dominant_energy_saturates_softmax(self):
        row = attention_weights_row(np.array([50.0, 0.0, 0.0]))
        assert row[0] == pytest.approx(1.0, abs=1e-9)

    def test_linear_mode_divides_by_total(self):
        e = np.array([1.0, 3.0])
        np.testing.assert_allclose(
            attention_weights_row(e, mode="linear"), [0.25, 0.75], atol=1e-15
        )
        with pytest.raises(DegenerateInputError):
            attention_weights_row(np.zeros(3), mode="linear")

    def test_rows_always_sum_to_one(self):
        rng = np.random.default_rng(14)
        for mode in ("softmax", "linear"):
            row = attention_weights_row(rng.uniform(0.1, 2.0, 7), mode=mode)
            assert row.sum() == pytest.approx(1.0, abs=1e-12)

    def test_output_requires_row_stochastic_mix(self):
        rng = np.random.default_rng(15)
        seq = _rand_carray(rng, (3, 2))
        wv = _rand_carray(rng, (2, 2))
        with pytest.raises(PreconditionError):
            attention_output(np.full((2, 3), 0.5), seq, wv)

    def test_uniform_mix_averages_projected_rows(self):
        rng = np.random.default_rng(16)
        seq = _rand_carray(rng, (4, 3))
        wv = _rand_carray(rng, (3, 3))
        out = attention_output(np.full((1, 4), 0.25), seq, wv)
        want = (seq.to_complex() @ wv.to_complex()).mean(axis=0)
        np.testing.assert_allclose(out.to_complex()[0], want, atol=1e-12)

    def test_shared_planes_halve_the_parameter_count(self):
        rng = np.random.default_rng(17)
        full = attention_parameter_count(init_attention(6, rng))
        shared = attention_parameter_count(init_attention(6, rng, share_real_imag=True))
        assert full == 3 * 2 * 6 * 6
        assert shared * 2 == full

    def test_shared_construction_requires_aliasing(self):
        a = np.eye(2)
        with pytest.raises(ShapeError):
            AttentionWeights(
                wq=ComplexArray(a, a.copy()),
                wk=ComplexArray(a, a),
                wv=ComplexArray(a, a),
                share_real_imag=True,
            )


class TestModulusReadout:
    def test_identity_readout_of_real_features(self):
        z = ComplexArray(np.array([1.5, 0.25]), np.zeros(2))
        np.testing.assert_allclose(modulus_readout(z, np.eye(2)), [1.5, 0.25], atol=1e-15)

    def test_matches_explicit_modulus_matmul(self):
        rng = np.random.default_rng(18)
        z = _rand_carray(rng, (5,))
        w = rng.normal(size=(3, 5))
        want = w @ np.abs(z.to_complex())
        np.testing.assert_allclose(modulus_readout(z, w), want, atol=1e-12)

    def test_batch_and_vector_paths_agree(self):
        rng = np.random.default_rng(19)
        z = _rand_carray(rng, (4, 5))
        w = rng.normal(size=(3, 5))
        batched = modulus_readout(z, w)
        for i in range(4):
            row = modulus_readout(ComplexArray(z.re[i], z.im[i]), w)
            np.testing.assert_allclose(batched[i], row, atol=1e-15)

    def test_invariant_under_global_phase(self):
        rng = np.random.default_rng(20)
        z = _rand_carray(rng, (6,))
        w = rng.normal(size=(2, 6))
        base = modulus_readout(z, w)
        for phi in rng.uniform(0.0, 2.0 * math.pi, 10):
            np.testing.assert_allclose(modulus_readout(_rotate(z, phi), w), base, atol=1e-9)


class TestPipelinePhaseInvariance:
    def test_pooled_energy_and_readout_survive_rotation(self):
        rng = np.random.default_rng(21)
        table = init_table(12, 4, scheme="full", phase_mode="full", rng=rng)
        seq = embed_sequence(table, rng.integers(0, 12, size=8))
        weights = init_attention(4, rng)
        w_out = rng.normal(size=(3, 4))
        base_energy = attention_energy(
            ComplexArray(seq.re[0], seq.im[0]), ComplexArray(seq.re[1], seq.im[1]), weights, n=8
        )
        base_logits = modulus_readout(fasttext_pool(seq), w_out)
        for phi in (0.3, 1.9, 5.1):
            rot = _rotate(seq, phi)
            energy = attention_energy(
                ComplexArray(rot.re[0], rot.im[0]), ComplexArray(rot.re[1], rot.im[1]), weights, n=8
            )
            assert energy == pytest.approx(base_energy, abs=1e-9)
            logits = modulus_readout(fasttext_pool(rot), w_out)
            np.testing.assert_allclose(logits, base_logits, atol=1e-9)
