"""Classical-to-quantum feature maps.

Amplitude encoding zero-pads a feature vector to 2**n entries and writes it,
normalized, straight into the state amplitudes. Angle encoding rotates each
qubit of the ground state by one feature value via Ry; the `AngleScaler`
squashes raw features into [0, pi] so the rotations stay on the |0>-to-|1>
arc without wrapping.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import PcaModel, pca_transform
from .simulator import StateVector, ry_kernel, zero_state, zero_state_batch


def amplitude_encode(x, num_qubits: int) -> StateVector:
    """Normalize `x`, zero-padded to 2**n entries, into state amplitudes."""
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    dim = 1 << num_qubits
    if arr.size == 0:
        raise ValueError("cannot encode an empty feature vector")
    if arr.size > dim:
        raise ValueError(
            f"capacity exceeded: {arr.size} features need more than {num_qubits} qubits"
        )
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot amplitude-encode an all-zero vector")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[: arr.size] = arr / norm
    return StateVector(num_qubits, amps)


def angle_encode(x, state: StateVector) -> StateVector:
    """Rotate qubit i of a ground state by Ry(x[i]); mutates and returns it."""
    arr = np.asarray(x, dtype=np.float64).reshape(-1)
    if arr.size != state.num_qubits:
        raise ValueError(
            f"need one angle per qubit: got {arr.size} for {state.num_qubits} qubits"
        )
    for qubit, angle in enumerate(arr):
        ry_kernel(state.amplitudes, state.num_qubits, qubit, angle)
    return state


@dataclass
class AngleScaler:
    """Per-feature min-max map onto [0, pi], fitted on training rows only."""

    minimum: np.ndarray
    maximum: np.ndarray


def scaler_fit(train_features: np.ndarray) -> AngleScaler:
    x = np.asarray(train_features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("scaler needs a matrix with at least 2 rows")
    return AngleScaler(x.min(axis=0), x.max(axis=0))


def scaler_apply(scaler: AngleScaler, x: np.ndarray) -> np.ndarray:
    """Map features to radians: min -> 0, max -> pi, out-of-range clamped.

    Degenerate columns (max == min) map to the midpoint pi/2. Accepts one
    vector (F,) or a matrix (M, F).
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape[-1] != scaler.minimum.shape[0]:
        raise ValueError(
            f"expected {scaler.minimum.shape[0]} features, got {arr.shape[-1]}"
        )
    span = scaler.maximum - scaler.minimum
    degenerate = span == 0.0
    safe_span = np.where(degenerate, 1.0, span)
    scaled = np.pi * (arr - scaler.minimum) / safe_span
    scaled = np.where(degenerate, np.pi / 2.0, scaled)
    return np.clip(scaled, 0.0, np.pi)


class AmplitudeEncoder:
    """Feature vectors straight into amplitudes; no preprocessing."""

    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits

    def encode(self, x) -> StateVector:
        return amplitude_encode(x, self.num_qubits)

    def encode_batch(self, features: np.ndarray) -> np.ndarray:
        """(M, F) rows -> (M, 2**n) raw prep amplitudes (real, float64)."""
        x = np.asarray(features, dtype=np.float64)
        if x.shape[1] > (1 << self.num_qubits):
            raise ValueError(
                f"capacity exceeded: {x.shape[1]} features on {self.num_qubits} qubits"
            )
        norms = np.linalg.norm(x, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("cannot amplitude-encode an all-zero row")
        amps = np.zeros((x.shape[0], 1 << self.num_qubits), dtype=np.float64)
        amps[:, : x.shape[1]] = x / norms[:, None]
        return amps


class AngleEncoder:
    """Optional PCA, then min-max scaling, then one Ry rotation per qubit."""

    def __init__(self, num_qubits: int, pca: PcaModel | None = None,
                 scaler: AngleScaler | None = None):
        self.num_qubits = num_qubits
        self.pca = pca
        self.scaler = scaler

    def angles(self, x) -> np.ndarray:
        y = np.asarray(x, dtype=np.float64)
        if self.pca is not None:
            y = pca_transform(self.pca, y)
        if self.scaler is not None:
            y = scaler_apply(self.scaler, y)
        return y

    def encode(self, x) -> StateVector:
        return angle_encode(self.angles(x), zero_state(self.num_qubits))

    def encode_batch(self, features: np.ndarray) -> np.ndarray:
        angles = np.atleast_2d(self.angles(features))
        if angles.shape[1] != self.num_qubits:
            raise ValueError(
                f"need one angle per qubit: got {angles.shape[1]} for {self.num_qubits}"
            )
        amps = zero_state_batch(angles.shape[0], self.num_qubits)
        for qubit in range(self.num_qubits):
            ry_kernel(amps, self.num_qubits, qubit, angles[:, qubit])
        return amps
