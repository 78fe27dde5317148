"""Tests for the sinusoidal position table and the complex-exponential bridge."""

import math

import numpy as np
import pytest

from wavembed.embedding import ComplexEmbeddingTable, positional_part
from wavembed.errors import ConfigError
from wavembed.sinusoid import (
    SinusoidalPE,
    bijection_check,
    complex_pe,
    pe_frequency,
    pe_period,
    sinusoidal_pe,
)


class TestFrequencies:
    def test_first_pair_has_unit_frequency(self):
        assert pe_frequency(0, 128) == 1.0

    def test_last_pair_matches_literal(self):
        # 10000 ** (-126/128)
        assert pe_frequency(63, 128) == pytest.approx(10000.0 ** (-126.0 / 128.0), rel=1e-15)

    def test_frequencies_strictly_decrease(self):
        freqs = [pe_frequency(k, 64) for k in range(32)]
        assert all(a > b for a, b in zip(freqs, freqs[1:]))

    def test_odd_model_dimension_rejected(self):
        with pytest.raises(ConfigError):
            pe_frequency(0, 7)

    def test_pair_index_out_of_range(self):
        with pytest.raises(IndexError):
            pe_frequency(32, 64)

    def test_period_is_two_pi_over_frequency(self):
        for k in (0, 3, 11):
            assert pe_period(k, 64) == pytest.approx(2.0 * math.pi / pe_frequency(k, 64), rel=1e-15)


class TestTable:
    def test_position_zero_alternates_zero_one(self):
        row = sinusoidal_pe(0, 8)
        np.testing.assert_array_equal(row[0::2], 0.0)
        np.testing.assert_array_equal(row[1::2], 1.0)

    def test_position_one_first_pair(self):
        row = sinusoidal_pe(1, 8)
        assert row[0] == pytest.approx(math.sin(1.0), abs=1e-15)
        assert row[1] == pytest.approx(math.cos(1.0), abs=1e-15)

    def test_rows_have_unit_pair_norms(self):
        for pos in (0, 5, 99):
            row = sinusoidal_pe(pos, 16)
            pair_sq = row[0::2] ** 2 + row[1::2] ** 2
            np.testing.assert_allclose(pair_sq, 1.0, atol=1e-12)

    def test_builder_stacks_per_position_rows(self):
        pe = SinusoidalPE.build(max_pos=10, d_model=6)
        assert pe.d_model == 6
        assert pe.values.shape == (10, 6)
        for pos in range(10):
            np.testing.assert_array_equal(pe.values[pos], sinusoidal_pe(pos, 6))


class TestComplexBridge:
    def test_unit_modulus_everywhere(self):
        for pos in (0, 1, 17, 400):
            for k in (0, 5, 31):
                assert abs(complex_pe(pos, k, 64)) == pytest.approx(1.0, abs=1e-12)

    def test_real_and_imaginary_parts_are_the_table_entries(self):
        d = 32
        for pos in (0, 3, 50):
            row = sinusoidal_pe(pos, d)
            for k in range(d // 2):
                z = complex_pe(pos, k, d)
                assert z.imag == pytest.approx(row[2 * k], abs=1e-12)
                assert z.real == pytest.approx(row[2 * k + 1], abs=1e-12)

    def test_rotation_advances_position_by_one(self):
        d = 16
        for k in range(d // 2):
            step = complex_pe(1, k, d) / complex_pe(0, k, d)
            for pos in (0, 4, 9):
                want = complex_pe(pos + 1, k, d)
                assert complex_pe(pos, k, d) * step == pytest.approx(want, abs=1e-12)

    def test_slow_pairs_are_nearly_periodic_at_rounded_period(self):
        d = 64
        for k in range(24, 32):
            shift = int(round(pe_period(k, d)))
            for pos in (0, 7):
                diff = abs(complex_pe(pos + shift, k, d) - complex_pe(pos, k, d))
                assert diff <= 1e-3

    def test_bijection_check_passes(self):
        report = bijection_check(max_pos=50, d_model=32)
        assert report.passed
        assert report.worst_residual <= 1e-12
        assert report.property_name == "sinusoidal-bijection"

    def test_unit_amplitude_table_reproduces_complex_pe(self):
        d_model = 16
        dim = d_model // 2
        freqs = np.array([pe_frequency(k, d_model) for k in range(dim)])
        table = ComplexEmbeddingTable(
            amplitudes=np.ones((1, dim)),
            frequencies=np.tile(freqs, (1, 1)),
            phases=np.zeros((1, dim)),
            scheme="full",
            phase_mode="full",
        )
        for pos in (1, 2, 9):
            part = positional_part(table, 0, pos)
            for k in range(dim):
                z = complex_pe(pos, k, d_model)
                assert part.re[k] == pytest.approx(z.real, abs=1e-12)
                assert part.im[k] == pytest.approx(z.imag, abs=1e-12)
