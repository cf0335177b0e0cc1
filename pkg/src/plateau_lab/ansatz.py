"""Periodic Ry ansatz layers, with or without a nearest-neighbour CNOT ring.

A circuit is `depth` repetitions of: one trainable Ry per qubit, then (for the
entangled family) CNOTs linking qubit i to i+1 with the last qubit wrapping
back to the first. Parameters are flat, indexed (layer l, qubit i) -> l*n + i.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .simulator import StateVector, cnot_kernel, ry_kernel

ENTANGLEMENTS = ("ring", "none")


@dataclass(frozen=True)
class AnsatzSpec:
    """Circuit topology: width (qubits), depth (layer repetitions), coupling."""

    num_qubits: int
    depth: int
    entanglement: str = "ring"

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"ansatz width must be >= 1, got {self.num_qubits}")
        if self.depth < 1:
            raise ValueError(f"ansatz depth must be >= 1, got {self.depth}")
        if self.entanglement not in ENTANGLEMENTS:
            raise ValueError(f"entanglement must be one of {ENTANGLEMENTS}")
        if self.entanglement == "ring" and self.num_qubits < 2:
            raise ValueError("ring entanglement requires at least 2 qubits")


def parameter_count(spec: AnsatzSpec) -> int:
    return spec.num_qubits * spec.depth


def init_parameters(spec: AnsatzSpec, seed: int) -> np.ndarray:
    """Seeded i.i.d. uniform angles on [0, 2*pi), one per (layer, qubit)."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * np.pi, parameter_count(spec))


def _check_theta(spec: AnsatzSpec, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape[-1] != parameter_count(spec):
        raise ValueError(
            f"expected {parameter_count(spec)} parameters, got {theta.shape[-1]}"
        )
    return theta


def ring_layout(num_qubits: int) -> list[tuple[int, int]]:
    """(control, target) pairs of one entangling layer, in application order.

    Nearest neighbours i -> i+1 plus the wrap-around n-1 -> 0; at n=2 the
    wrap would duplicate the only nearest-neighbour pair, so it is dropped.
    """
    pairs = [(i, i + 1) for i in range(num_qubits - 1)]
    if num_qubits >= 3:
        pairs.append((num_qubits - 1, 0))
    return pairs


@lru_cache(maxsize=None)
def _ring_permutation(num_qubits: int) -> np.ndarray:
    """Index map so that applying the whole CNOT ring is amps[..., perm]."""
    fwd = np.arange(1 << num_qubits, dtype=np.intp)
    for control, target in ring_layout(num_qubits):
        hit = (fwd >> control) & 1 == 1
        fwd = np.where(hit, fwd ^ (1 << target), fwd)
    perm = np.empty_like(fwd)
    perm[fwd] = np.arange(1 << num_qubits, dtype=np.intp)
    return perm


def rotation_matrices(theta: np.ndarray) -> np.ndarray:
    """All Ry matrices for an angle vector at once: (..., P) -> (..., P, 2, 2)."""
    half = 0.5 * np.asarray(theta, dtype=np.float64)
    c, s = np.cos(half), np.sin(half)
    rots = np.empty(half.shape + (2, 2))
    rots[..., 0, 0] = c
    rots[..., 0, 1] = -s
    rots[..., 1, 0] = s
    rots[..., 1, 1] = c
    return rots


# Below this sub-block length a rotation is applied as one BLAS product on the
# flattened last axis (operator kron(rot, I_L) acting on rows of length 2L);
# broadcasting (2,2) @ (..., H, 2, L) is only competitive once L is large.
_FAT_L_MAX = 16


def prepare_gate(spec: AnsatzSpec, index: int, rot: np.ndarray):
    """Ready-to-apply operator for parameter `index`: (qubit, fat_or_none, rot)."""
    qubit = index % spec.num_qubits
    low = 1 << qubit
    if low <= _FAT_L_MAX and spec.num_qubits > 1:
        fat = np.kron(rot, np.eye(low)).T.copy()  # right-multiply on 2L-rows
        return qubit, fat, rot
    return qubit, None, rot


def prepare_gates(spec: AnsatzSpec, theta: np.ndarray) -> list:
    """Per-gate operator plan for a shared (flat) parameter vector."""
    rots = rotation_matrices(theta)
    return [prepare_gate(spec, j, rots[j]) for j in range(theta.shape[0])]


def run_gates(amps: np.ndarray, spec: AnsatzSpec, gates: list) -> None:
    """Apply a prepared plan in place, ping-ponging between two buffers."""
    n = spec.num_qubits
    if not amps.flags.c_contiguous:
        raise ValueError("evolve needs C-contiguous amplitudes")
    cur, alt = amps, np.empty_like(amps)
    perm = _ring_permutation(n) if spec.entanglement == "ring" else None
    lead = amps.shape[:-1]
    for layer in range(spec.depth):
        base = layer * n
        for qubit in range(n):
            _, fat, rot = gates[base + qubit]
            if fat is not None:
                width = fat.shape[0]
                np.matmul(cur.reshape(-1, width), fat, out=alt.reshape(-1, width))
            else:
                shape = lead + (1 << (n - 1 - qubit), 2, 1 << qubit)
                np.matmul(rot, cur.reshape(shape), out=alt.reshape(shape))
            cur, alt = alt, cur
        if perm is not None:
            np.take(cur, perm, axis=-1, out=alt)
            cur, alt = alt, cur
    if cur is not amps:
        amps[...] = cur


def _evolve_per_row(amps: np.ndarray, spec: AnsatzSpec, rots: np.ndarray) -> None:
    """Evolution when every batch row carries its own angles (scan/encoding)."""
    n = spec.num_qubits
    if not amps.flags.c_contiguous:
        raise ValueError("evolve needs C-contiguous amplitudes")
    if rots.shape[:-3] != amps.shape[:-1]:
        raise ValueError("per-row rotations must match the batch shape")
    cur, alt = amps, np.empty_like(amps)
    perm = _ring_permutation(n) if spec.entanglement == "ring" else None
    lead = amps.shape[:-1]
    for layer in range(spec.depth):
        base = layer * n
        for qubit in range(n):
            rot = rots[..., base + qubit, None, :, :]  # broadcast over high bits
            shape = lead + (1 << (n - 1 - qubit), 2, 1 << qubit)
            np.matmul(rot, cur.reshape(shape), out=alt.reshape(shape))
            cur, alt = alt, cur
        if perm is not None:
            np.take(cur, perm, axis=-1, out=alt)
            cur, alt = alt, cur
    if cur is not amps:
        amps[...] = cur


def evolve(amps: np.ndarray, spec: AnsatzSpec, theta: np.ndarray) -> None:
    """Run the ansatz in place on raw amplitudes of shape (..., 2**n).

    `theta` is either a flat (n*depth,) vector shared by all batch rows, or a
    (batch, n*depth) array giving each row its own angles. `gate_sequence`
    below is the plain per-gate reference these paths are tested against.
    """
    theta = _check_theta(spec, theta)
    if theta.ndim > 1:
        _evolve_per_row(amps, spec, rotation_matrices(theta))
    else:
        run_gates(amps, spec, prepare_gates(spec, theta))


def gate_sequence(amps: np.ndarray, spec: AnsatzSpec, theta: np.ndarray) -> None:
    """Reference evolution: one simulator kernel call per gate, in place."""
    n = spec.num_qubits
    theta = _check_theta(spec, theta)
    for layer in range(spec.depth):
        base = layer * n
        for qubit in range(n):
            ry_kernel(amps, n, qubit, theta[..., base + qubit])
        if spec.entanglement == "ring":
            for control, target in ring_layout(n):
                cnot_kernel(amps, n, control, target)


def apply_ansatz(state: StateVector, spec: AnsatzSpec, theta: np.ndarray) -> StateVector:
    """Apply the full circuit to `state` in place and return it."""
    if state.num_qubits != spec.num_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits but ansatz expects {spec.num_qubits}"
        )
    evolve(state.amplitudes, spec, np.asarray(theta, dtype=np.float64).reshape(-1))
    return state
