"""Feature-map behaviour: amplitude normalization, angle rotations, scaling."""

import numpy as np
import pytest

from plateau_lab.data import pca_fit, pca_transform
from plateau_lab.encoding import (AmplitudeEncoder, AngleEncoder, amplitude_encode,
                                  angle_encode, scaler_apply, scaler_fit)
from plateau_lab.simulator import zero_state


class TestAmplitudeEncode:
    def test_basis_vector_is_ground_state(self):
        x = np.zeros(64)
        x[0] = 1.0
        state = amplitude_encode(x, 6)
        expected = np.zeros(64)
        expected[0] = 1.0
        np.testing.assert_allclose(state.amplitudes, expected)

    def test_three_four_five_with_padding(self):
        state = amplitude_encode([3.0, 4.0], 2)
        np.testing.assert_allclose(state.amplitudes, [0.6, 0.8, 0.0, 0.0])

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="all-zero"):
            amplitude_encode([0.0, 0.0], 1)

    def test_capacity_error(self):
        with pytest.raises(ValueError, match="capacity"):
            amplitude_encode(np.ones(5), 2)

    def test_output_proportional_to_padded_input(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(10)
        state = amplitude_encode(x, 4)
        padded = np.zeros(16)
        padded[:10] = x
        recovered = state.amplitudes.real * np.linalg.norm(padded)
        np.testing.assert_allclose(recovered, padded, atol=1e-12)

    @pytest.mark.parametrize("scale", [0.25, 3.0, 1e6])
    def test_scale_invariance(self, scale):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(8)
        a = amplitude_encode(x, 3).amplitudes
        b = amplitude_encode(scale * x, 3).amplitudes
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_unit_norm(self):
        state = amplitude_encode(np.arange(1.0, 8.0), 3)
        assert state.norm_squared() == pytest.approx(1.0, abs=1e-12)


class TestAngleEncode:
    def test_zero_angles_leave_ground_state(self):
        state = angle_encode([0.0, 0.0, 0.0], zero_state(3))
        expected = np.zeros(8)
        expected[0] = 1.0
        np.testing.assert_allclose(state.amplitudes, expected)

    def test_pi_excites_single_qubit(self):
        state = angle_encode([np.pi], zero_state(1))
        np.testing.assert_allclose(state.amplitudes, [0, 1], atol=1e-12)

    def test_qubit_zero_is_least_significant(self):
        state = angle_encode([np.pi, 0.0], zero_state(2))
        np.testing.assert_allclose(state.amplitudes, [0, 1, 0, 0], atol=1e-12)

    def test_half_angle_amplitudes(self):
        t = 0.73
        state = angle_encode([t], zero_state(1))
        np.testing.assert_allclose(state.amplitudes,
                                   [np.cos(t / 2), np.sin(t / 2)], atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="one angle per qubit"):
            angle_encode([0.1, 0.2], zero_state(3))


class TestAngleScaler:
    def test_fit_stores_column_extremes(self):
        scaler = scaler_fit(np.array([[0.0, 5.0], [8.0, 5.0], [16.0, 5.0]]))
        np.testing.assert_array_equal(scaler.minimum, [0.0, 5.0])
        np.testing.assert_array_equal(scaler.maximum, [16.0, 5.0])

    def test_needs_two_rows(self):
        with pytest.raises(ValueError, match="at least 2 rows"):
            scaler_fit(np.zeros((1, 4)))
        with pytest.raises(ValueError, match="at least 2 rows"):
            scaler_fit(np.zeros((0, 4)))

    def test_endpoints_and_midpoint(self):
        scaler = scaler_fit(np.array([[2.0], [6.0]]))
        assert scaler_apply(scaler, [2.0])[0] == pytest.approx(0.0)
        assert scaler_apply(scaler, [6.0])[0] == pytest.approx(np.pi)
        assert scaler_apply(scaler, [4.0])[0] == pytest.approx(np.pi / 2)

    def test_degenerate_column_maps_to_midpoint(self):
        scaler = scaler_fit(np.array([[5.0], [5.0], [5.0]]))
        assert scaler_apply(scaler, [5.0])[0] == pytest.approx(np.pi / 2)
        assert scaler_apply(scaler, [99.0])[0] == pytest.approx(np.pi / 2)

    def test_out_of_range_clamped(self):
        scaler = scaler_fit(np.array([[0.0], [1.0]]))
        assert scaler_apply(scaler, [-3.0])[0] == 0.0
        assert scaler_apply(scaler, [4.0])[0] == np.pi

    def test_dimension_mismatch(self):
        scaler = scaler_fit(np.zeros((2, 3)))
        with pytest.raises(ValueError, match="expected 3 features"):
            scaler_apply(scaler, [1.0, 2.0])

    def test_training_rows_land_in_range(self):
        rng = np.random.default_rng(3)
        rows = rng.uniform(-10, 10, (40, 6))
        scaler = scaler_fit(rows)
        scaled = scaler_apply(scaler, rows)
        assert scaled.min() >= 0.0 and scaled.max() <= np.pi

    def test_scaled_minimum_encodes_to_ground_state(self):
        rng = np.random.default_rng(4)
        rows = rng.uniform(0, 16, (20, 2))
        scaler = scaler_fit(rows)
        angles = scaler_apply(scaler, rows.min(axis=0))
        state = angle_encode(angles, zero_state(2))
        assert abs(state.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)


class TestEncoders:
    def test_amplitude_batch_matches_single(self):
        rng = np.random.default_rng(5)
        rows = rng.uniform(0.1, 1.0, (7, 10))
        enc = AmplitudeEncoder(4)
        batch = enc.encode_batch(rows)
        for i, row in enumerate(rows):
            np.testing.assert_allclose(batch[i], enc.encode(row).amplitudes.real,
                                       atol=1e-14)

    def test_amplitude_batch_rejects_zero_row(self):
        enc = AmplitudeEncoder(3)
        with pytest.raises(ValueError, match="all-zero"):
            enc.encode_batch(np.array([[1.0, 2.0], [0.0, 0.0]]))

    def test_angle_batch_matches_single(self):
        rng = np.random.default_rng(6)
        rows = rng.uniform(0, np.pi, (5, 3))
        enc = AngleEncoder(3)
        batch = enc.encode_batch(rows)
        for i, row in enumerate(rows):
            np.testing.assert_allclose(batch[i], enc.encode(row).amplitudes.real,
                                       atol=1e-14)

    def test_angle_pipeline_composes_pca_and_scaler(self):
        rng = np.random.default_rng(7)
        rows = rng.uniform(0, 16, (60, 64))
        pca = pca_fit(rows, 4)
        reduced = pca_transform(pca, rows)
        scaler = scaler_fit(reduced)
        enc = AngleEncoder(4, pca, scaler)
        x = rows[11]
        manual = scaler_apply(scaler, pca_transform(pca, x))
        np.testing.assert_allclose(enc.angles(x), manual)
        np.testing.assert_allclose(enc.encode(x).amplitudes,
                                   angle_encode(manual, zero_state(4)).amplitudes)
