"""Ansatz construction: layer structure, ring coupling, parameter handling."""

import numpy as np
import pytest

from plateau_lab.ansatz import (AnsatzSpec, apply_ansatz, evolve, gate_sequence,
                                init_parameters, parameter_count, ring_layout)
from plateau_lab.simulator import set_amplitudes, zero_state, zero_state_batch

from conftest import random_unit_amplitudes


class TestSpec:
    @pytest.mark.parametrize("n,m,expected", [(6, 10, 60), (14, 10, 140), (1, 1, 1)])
    def test_parameter_count(self, n, m, expected):
        ent = "none" if n < 2 else "ring"
        assert parameter_count(AnsatzSpec(n, m, ent)) == expected

    def test_requires_positive_dimensions(self):
        with pytest.raises(ValueError, match="width"):
            AnsatzSpec(0, 1, "none")
        with pytest.raises(ValueError, match="depth"):
            AnsatzSpec(2, 0, "ring")

    def test_ring_needs_two_qubits(self):
        with pytest.raises(ValueError, match="at least 2"):
            AnsatzSpec(1, 1, "ring")

    def test_unknown_entanglement(self):
        with pytest.raises(ValueError, match="entanglement"):
            AnsatzSpec(2, 1, "all")

    def test_ring_layout_wraps_for_three_plus(self):
        assert ring_layout(2) == [(0, 1)]
        assert ring_layout(3) == [(0, 1), (1, 2), (2, 0)]
        assert ring_layout(5)[-1] == (4, 0)


class TestApplyAnsatz:
    def test_zero_angles_unentangled_is_identity(self):
        rng = np.random.default_rng(0)
        state = set_amplitudes(3, random_unit_amplitudes(rng, 3))
        reference = state.amplitudes.copy()
        apply_ansatz(state, AnsatzSpec(3, 4, "none"), np.zeros(12))
        np.testing.assert_allclose(state.amplitudes, reference, atol=1e-12)

    def test_zero_angles_ring_fixes_ground_state(self):
        state = apply_ansatz(zero_state(4), AnsatzSpec(4, 3, "ring"), np.zeros(12))
        expected = np.zeros(16)
        expected[0] = 1.0
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    def test_bell_preparation(self):
        state = apply_ansatz(zero_state(2), AnsatzSpec(2, 1, "ring"),
                             np.array([np.pi / 2, 0.0]))
        np.testing.assert_allclose(state.amplitudes,
                                   [np.sqrt(0.5), 0, 0, np.sqrt(0.5)], atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="parameters"):
            apply_ansatz(zero_state(2), AnsatzSpec(2, 2, "ring"), np.zeros(3))
        with pytest.raises(ValueError, match="qubits"):
            apply_ansatz(zero_state(3), AnsatzSpec(2, 2, "ring"), np.zeros(4))

    def test_norm_preserved_on_random_specs(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            n = int(rng.integers(1, 11))
            m = int(rng.integers(1, 11))
            ent = "none" if n < 2 else ("ring" if rng.random() < 0.5 else "none")
            spec = AnsatzSpec(n, m, ent)
            state = set_amplitudes(n, random_unit_amplitudes(rng, n))
            apply_ansatz(state, spec, rng.uniform(0, 2 * np.pi, n * m))
            assert abs(state.norm_squared() - 1.0) <= 1e-10

    def test_unentangled_is_kron_of_single_qubit_maps(self):
        # product circuits factor exactly: 2-qubit result = kron of 1-qubit results
        rng = np.random.default_rng(2)
        m = 3
        theta = rng.uniform(0, 2 * np.pi, 2 * m)
        full = apply_ansatz(zero_state(2), AnsatzSpec(2, m, "none"), theta)
        q0 = apply_ansatz(zero_state(1), AnsatzSpec(1, m, "none"), theta[0::2])
        q1 = apply_ansatz(zero_state(1), AnsatzSpec(1, m, "none"), theta[1::2])
        np.testing.assert_allclose(full.amplitudes,
                                   np.kron(q1.amplitudes, q0.amplitudes), atol=1e-12)

    @pytest.mark.parametrize("ent", ["ring", "none"])
    def test_layer_periodicity(self, ent):
        rng = np.random.default_rng(3)
        n = 4
        theta = rng.uniform(0, 2 * np.pi, 2 * n)
        two_layer = apply_ansatz(zero_state(n), AnsatzSpec(n, 2, ent), theta)
        stepwise = zero_state(n)
        apply_ansatz(stepwise, AnsatzSpec(n, 1, ent), theta[:n])
        apply_ansatz(stepwise, AnsatzSpec(n, 1, ent), theta[n:])
        np.testing.assert_allclose(two_layer.amplitudes, stepwise.amplitudes,
                                   atol=1e-12)


class TestFastPathAgainstGateSequence:
    """The planned/permutation evolution must match the per-gate kernels."""

    @pytest.mark.parametrize("ent", ["ring", "none"])
    def test_shared_angles(self, ent):
        rng = np.random.default_rng(4)
        for n in range(1, 10):
            if ent == "ring" and n < 2:
                continue
            m = int(rng.integers(1, 5))
            spec = AnsatzSpec(n, m, ent)
            theta = rng.uniform(0, 2 * np.pi, n * m)
            batch = np.stack([random_unit_amplitudes(rng, n, complex_valued=False)
                              for _ in range(3)])
            fast, naive = batch.copy(), batch.copy()
            evolve(fast, spec, theta)
            gate_sequence(naive, spec, theta)
            np.testing.assert_allclose(fast, naive, atol=1e-13)

    def test_complex_input(self):
        rng = np.random.default_rng(5)
        spec = AnsatzSpec(4, 3, "ring")
        theta = rng.uniform(0, 2 * np.pi, 12)
        amps = random_unit_amplitudes(rng, 4)[None, :]
        fast, naive = amps.copy(), amps.copy()
        evolve(fast, spec, theta)
        gate_sequence(naive, spec, theta)
        np.testing.assert_allclose(fast, naive, atol=1e-13)

    def test_per_row_angles(self):
        rng = np.random.default_rng(6)
        spec = AnsatzSpec(3, 4, "ring")
        thetas = rng.uniform(0, 2 * np.pi, (6, 12))
        fast = zero_state_batch(6, 3)
        naive = fast.copy()
        evolve(fast, spec, thetas)
        gate_sequence(naive, spec, thetas)
        np.testing.assert_allclose(fast, naive, atol=1e-13)


class TestInitParameters:
    def test_same_seed_reproduces(self):
        spec = AnsatzSpec(5, 3, "ring")
        np.testing.assert_array_equal(init_parameters(spec, 42),
                                      init_parameters(spec, 42))

    def test_different_seeds_differ(self):
        spec = AnsatzSpec(5, 3, "ring")
        assert np.any(init_parameters(spec, 1) != init_parameters(spec, 2))

    def test_range_and_shape(self):
        spec = AnsatzSpec(4, 6, "ring")
        theta = init_parameters(spec, 9)
        assert theta.shape == (24,)
        assert theta.min() >= 0.0 and theta.max() < 2 * np.pi

    def test_uniform_mean_monte_carlo(self):
        # 10^4 draws; uniform on [0, 2*pi) has mean pi
        spec = AnsatzSpec(10, 10, "ring")
        draws = np.concatenate([init_parameters(spec, seed) for seed in range(100)])
        assert draws.size == 10_000
        assert abs(draws.mean() - np.pi) < 0.1
