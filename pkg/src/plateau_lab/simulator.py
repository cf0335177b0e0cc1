"""Dense statevector simulation of small qubit registers.

Only the two gates the classifier circuits need (Ry, CNOT) are implemented,
plus direct amplitude assignment and Pauli-Z expectations. Qubit i maps to
bit i of the basis index, so qubit 0 is the least significant bit.

The module-level kernels (`ry_kernel`, `cnot_kernel`, `z_expectations`)
operate in place on raw complex arrays of shape (..., 2**n); leading axes are
treated as a batch, which is what makes batched training and variance scans
cheap. The public operations wrap them for a single `StateVector`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24  # 2**24 amplitudes = 256 MB of complex128; desk-scale bound

# evolved states stay normalized to 1e-10; externally supplied amplitudes
# get a looser bound to absorb accumulation error in long normalizations
INPUT_NORM_TOL = 1e-9


@dataclass
class StateVector:
    """An n-qubit pure state: 2**n complex amplitudes with unit norm."""

    num_qubits: int
    amplitudes: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def _check_width(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"invalid width: need 1 <= n <= {MAX_QUBITS}, got {n!r}")


def _check_qubit(n: int, qubit: int) -> None:
    if not 0 <= qubit < n:
        raise ValueError(f"qubit index {qubit} out of range for {n} qubits")


def zero_state(num_qubits: int) -> StateVector:
    """All qubits in the ground state |0...0>."""
    _check_width(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def zero_state_batch(batch: int, num_qubits: int) -> np.ndarray:
    """Raw (batch, 2**n) array of ground states, for the batched kernels.

    Ry and CNOT never leave the real field, so batched pipelines run on
    float64 amplitudes; the public StateVector API stays complex.
    """
    _check_width(num_qubits)
    amps = np.zeros((batch, 1 << num_qubits), dtype=np.float64)
    amps[:, 0] = 1.0
    return amps


def set_amplitudes(num_qubits: int, amps) -> StateVector:
    """Build a state directly from 2**n amplitudes (must be unit norm)."""
    _check_width(num_qubits)
    arr = np.asarray(amps, dtype=np.complex128).reshape(-1).copy()
    expected = 1 << num_qubits
    if arr.shape[0] != expected:
        raise ValueError(
            f"expected {expected} amplitudes for {num_qubits} qubits, got {arr.shape[0]}"
        )
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > INPUT_NORM_TOL:
        raise ValueError(f"amplitudes not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
    return StateVector(num_qubits, arr)


def ry_kernel(amps: np.ndarray, num_qubits: int, qubit: int, angle) -> None:
    """Apply Ry(angle) = [[cos a/2, -sin a/2], [sin a/2, cos a/2]] in place.

    `angle` may be a scalar (shared across the batch) or an array matching the
    leading axes of `amps` (one angle per batch row).
    """
    half = 0.5 * np.asarray(angle, dtype=np.float64)
    c, s = np.cos(half), np.sin(half)
    if c.ndim:
        # per-row angles: broadcast over the (high, low) amplitude axes
        c = c.reshape(c.shape + (1, 1))
        s = s.reshape(s.shape + (1, 1))
    view = amps.reshape(amps.shape[:-1] + (1 << (num_qubits - 1 - qubit), 2, 1 << qubit))
    a0 = view[..., 0, :].copy()
    a1 = view[..., 1, :]
    view[..., 0, :] = c * a0 - s * a1
    view[..., 1, :] = s * a0 + c * a1


def cnot_kernel(amps: np.ndarray, num_qubits: int, control: int, target: int) -> None:
    """Flip `target` where `control` is 1, in place over any batch shape."""
    lead = amps.ndim - 1
    view = amps.reshape(amps.shape[:-1] + (2,) * num_qubits)
    # qubit q lives on tensor axis lead + (n - 1 - q) under C-order reshape
    idx10 = [slice(None)] * view.ndim
    idx10[lead + num_qubits - 1 - control] = 1
    idx11 = list(idx10)
    idx10[lead + num_qubits - 1 - target] = 0
    idx11[lead + num_qubits - 1 - target] = 1
    t10, t11 = tuple(idx10), tuple(idx11)
    tmp = view[t10].copy()
    view[t10] = view[t11]
    view[t11] = tmp


_SIGN_CACHE: dict[int, np.ndarray] = {}
_SIGN_CACHE_MAX_QUBITS = 16  # 2**16 x 16 floats; larger widths fall back to the loop


def _sign_matrix(num_qubits: int) -> np.ndarray:
    """(2**n, n) matrix of Z eigenvalues: +1 where bit q of the index is 0."""
    cached = _SIGN_CACHE.get(num_qubits)
    if cached is None:
        idx = np.arange(1 << num_qubits, dtype=np.int64)
        bits = (idx[:, None] >> np.arange(num_qubits)[None, :]) & 1
        cached = _SIGN_CACHE[num_qubits] = (1.0 - 2.0 * bits).astype(np.float64)
    return cached


def z_expectations(amps: np.ndarray, num_qubits: int) -> np.ndarray:
    """<Z_q> for every qubit; output shape = batch shape + (n,)."""
    if np.iscomplexobj(amps):
        probs = amps.real ** 2 + amps.imag ** 2
    else:
        probs = amps * amps
    if num_qubits <= _SIGN_CACHE_MAX_QUBITS:
        return probs @ _sign_matrix(num_qubits)
    out = np.empty(amps.shape[:-1] + (num_qubits,), dtype=np.float64)
    for q in range(num_qubits):
        view = probs.reshape(probs.shape[:-1] + (1 << (num_qubits - 1 - q), 2, 1 << q))
        p1 = view[..., 1, :].sum(axis=(-2, -1))
        out[..., q] = 1.0 - 2.0 * p1
    return out


def apply_ry(state: StateVector, qubit: int, angle: float) -> StateVector:
    """Rotate one qubit about Y; mutates `state` in place and returns it."""
    _check_qubit(state.num_qubits, qubit)
    ry_kernel(state.amplitudes, state.num_qubits, qubit, float(angle))
    return state


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    """Controlled-NOT; mutates `state` in place and returns it."""
    n = state.num_qubits
    _check_qubit(n, control)
    _check_qubit(n, target)
    if control == target:
        raise ValueError(f"invalid gate: control and target both {control}")
    cnot_kernel(state.amplitudes, n, control, target)
    return state


def expectation_z(state: StateVector, qubit: int) -> float:
    """<Z> on one qubit: +1 weight where its bit is 0, -1 where it is 1."""
    _check_qubit(state.num_qubits, qubit)
    n, q = state.num_qubits, qubit
    probs = np.abs(state.amplitudes) ** 2
    view = probs.reshape(1 << (n - 1 - q), 2, 1 << q)
    return float(1.0 - 2.0 * view[:, 1, :].sum())


def expectation_z_all(state: StateVector) -> np.ndarray:
    """<Z_q> for q = 0..n-1 as a float array of length n."""
    return z_expectations(state.amplitudes, state.num_qubits)
