"""Classical read-out head and the full loss/gradient chain.

The n per-qubit expectations feed a dense 10-neuron layer with softmax; the
loss is multi-class cross entropy on the true label. Gradients flow back
through the dense layer analytically and into the circuit angles through the
parameter-shift Jacobian.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import AnsatzSpec
from .gradient import forward_batch, jacobian_batch

NUM_CLASSES = 10
PROB_FLOOR = 1e-12  # keeps the log finite on confident misclassification


@dataclass
class DenseParams:
    weights: np.ndarray  # (10, n)
    biases: np.ndarray   # (10,)

    def copy(self) -> "DenseParams":
        return DenseParams(self.weights.copy(), self.biases.copy())


@dataclass
class ModelParameters:
    theta: np.ndarray    # (n*m,) circuit angles
    dense: DenseParams

    def copy(self) -> "ModelParameters":
        return ModelParameters(self.theta.copy(), self.dense.copy())


@dataclass
class LossGradients:
    d_theta: np.ndarray    # (n*m,)
    d_weights: np.ndarray  # (10, n)
    d_biases: np.ndarray   # (10,)


def init_dense(num_inputs: int, seed: int) -> DenseParams:
    """Fan-based uniform weights on [-sqrt(6/(n+10)), +...], zero biases."""
    bound = np.sqrt(6.0 / (num_inputs + NUM_CLASSES))
    rng = np.random.default_rng(seed)
    weights = rng.uniform(-bound, bound, (NUM_CLASSES, num_inputs))
    return DenseParams(weights, np.zeros(NUM_CLASSES))


def dense_softmax(expectations: np.ndarray, dense: DenseParams) -> np.ndarray:
    """Class probabilities from expectations: softmax(W e + b), max-shifted."""
    e = np.asarray(expectations, dtype=np.float64)
    if e.shape[-1] != dense.weights.shape[1]:
        raise ValueError(
            f"expected {dense.weights.shape[1]} expectations, got {e.shape[-1]}"
        )
    logits = e @ dense.weights.T + dense.biases
    logits -= logits.max(axis=-1, keepdims=True)
    exp = np.exp(logits)
    return exp / exp.sum(axis=-1, keepdims=True)


def cross_entropy(probs: np.ndarray, label: int) -> float:
    """-ln p_label with a 1e-12 floor; label must be a class index 0-9."""
    if not 0 <= label < NUM_CLASSES:
        raise ValueError(f"label {label} out of range 0..{NUM_CLASSES - 1}")
    return float(-np.log(max(float(probs[label]), PROB_FLOOR)))


def chain_on_preps(preps: np.ndarray, labels: np.ndarray, model: ModelParameters,
                   spec: AnsatzSpec) -> tuple[float, LossGradients, np.ndarray]:
    """Mean loss and mean gradients over already-encoded prep amplitudes.

    Returns the per-sample class probabilities too, so a training loop can
    track batch accuracy without a second forward pass.
    """
    batch = preps.shape[0]
    expectations = forward_batch(preps, spec, model.theta)        # (B, n)
    probs = dense_softmax(expectations, model.dense)              # (B, 10)
    picked = np.maximum(probs[np.arange(batch), labels], PROB_FLOOR)
    loss = float(-np.log(picked).mean())

    delta = probs.copy()                                          # p - onehot(y)
    delta[np.arange(batch), labels] -= 1.0
    d_biases = delta.mean(axis=0)
    d_weights = delta.T @ expectations / batch
    d_expectations = delta @ model.dense.weights                  # (B, n)

    jac = jacobian_batch(preps, spec, model.theta)                # (B, n, P)
    d_theta = np.einsum("bnp,bn->p", jac, d_expectations) / batch
    return loss, LossGradients(d_theta, d_weights, d_biases), probs


def loss_and_gradients(x, label: int, model: ModelParameters, spec: AnsatzSpec,
                       encoder) -> tuple[float, LossGradients]:
    """Loss and all parameter gradients for a single sample."""
    if not 0 <= label < NUM_CLASSES:
        raise ValueError(f"label {label} out of range 0..{NUM_CLASSES - 1}")
    prep = encoder.encode(x)
    loss, grads, _ = chain_on_preps(
        prep.amplitudes[None, :], np.array([label]), model, spec
    )
    return loss, grads


def batch_loss_and_gradients(features: np.ndarray, labels: np.ndarray,
                             model: ModelParameters, spec: AnsatzSpec,
                             encoder) -> tuple[float, LossGradients]:
    """Arithmetic mean of per-sample losses and gradients over a batch."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise ValueError("batch must be nonempty")
    if labels.size and (labels.min() < 0 or labels.max() >= NUM_CLASSES):
        raise ValueError("labels out of range 0..9")
    preps = encoder.encode_batch(features)
    loss, grads, _ = chain_on_preps(preps, labels, model, spec)
    return loss, grads
