"""Derivatives of per-qubit Z expectations with respect to circuit angles.

Every trainable gate is a Pauli-Y rotation, so the two-point shift rule with
s = pi/2 is exact: d<Z_i>/d theta_j = (f_i(theta_j + pi/2) - f_i(theta_j - pi/2)) / 2.
A central finite-difference Jacobian is kept alongside as the verification
oracle; it must never share code with the shift-rule path.
"""
from __future__ import annotations

import numpy as np

from .ansatz import (AnsatzSpec, evolve, parameter_count, prepare_gate,
                     prepare_gates, run_gates, rotation_matrices)
from .simulator import StateVector, z_expectations

SHIFT = np.pi / 2.0


def forward(prep: StateVector, spec: AnsatzSpec, theta: np.ndarray) -> np.ndarray:
    """<Z_i> after running the ansatz on a copy of the encoded state."""
    if prep.num_qubits != spec.num_qubits:
        raise ValueError("prep width does not match ansatz width")
    amps = prep.amplitudes.copy()
    evolve(amps, spec, np.asarray(theta, dtype=np.float64))
    return z_expectations(amps, spec.num_qubits)


def forward_batch(preps: np.ndarray, spec: AnsatzSpec, theta: np.ndarray) -> np.ndarray:
    """Batched forward pass on raw prep amplitudes (B, 2**n) -> (B, n)."""
    amps = preps.copy()
    evolve(amps, spec, theta)
    return z_expectations(amps, spec.num_qubits)


def parameter_shift_jacobian(prep: StateVector, spec: AnsatzSpec,
                             theta: np.ndarray) -> np.ndarray:
    """Exact Jacobian entries J[i, j] = d<Z_i>/d theta_j via 2*n*m evaluations."""
    jac = jacobian_batch(prep.amplitudes[None, :], spec,
                         np.asarray(theta, dtype=np.float64))
    return jac[0]


def jacobian_batch(preps: np.ndarray, spec: AnsatzSpec, theta: np.ndarray) -> np.ndarray:
    """Shift-rule Jacobians for a batch of preps: (B, 2**n) -> (B, n, n*m).

    One pair of shifted circuit runs per parameter (2*n*m runs per batch);
    only the shifted gate's rotation matrix is rebuilt between runs.
    """
    theta = np.asarray(theta, dtype=np.float64)
    count = parameter_count(spec)
    if theta.shape != (count,):
        raise ValueError(f"expected a flat vector of {count} parameters")
    gates = prepare_gates(spec, theta)
    jac = np.empty((preps.shape[0], spec.num_qubits, count), dtype=np.float64)
    scratch = np.empty_like(preps)
    sides = {}
    for j in range(count):
        unshifted = gates[j]
        for sign in (1.0, -1.0):
            rot = rotation_matrices(np.array(theta[j] + sign * SHIFT))
            gates[j] = prepare_gate(spec, j, rot)
            scratch[...] = preps
            run_gates(scratch, spec, gates)
            sides[sign] = z_expectations(scratch, spec.num_qubits)
        gates[j] = unshifted
        jac[:, :, j] = (sides[1.0] - sides[-1.0]) / 2.0
    return jac


def finite_difference_jacobian(prep: StateVector, spec: AnsatzSpec,
                               theta: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference oracle: (f(theta_j + h) - f(theta_j - h)) / (2h)."""
    if h <= 0:
        raise ValueError("step h must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    count = parameter_count(spec)
    jac = np.empty((spec.num_qubits, count), dtype=np.float64)
    for j in range(count):
        up = theta.copy()
        up[j] += h
        down = theta.copy()
        down[j] -= h
        jac[:, j] = (forward(prep, spec, up) - forward(prep, spec, down)) / (2.0 * h)
    return jac
