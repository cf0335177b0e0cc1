"""Optimization loop: Adam, reduce-LR-on-plateau, early stopping.

Validation loss (measured on the held-out test split after every epoch) is
the monitored quantity. An epoch "improves" when it beats the best seen loss
by more than 1e-6; after `lr_patience` consecutive non-improving epochs the
learning rate is multiplied by `lr_factor` (and the plateau counter restarts),
and after `stop_patience` consecutive non-improving epochs training halts.
The returned parameters are the ones from the best-validation-loss epoch.
"""
from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec
from .data import Dataset, SplitDataset, batches
from .gradient import forward_batch
from .head import ModelParameters, chain_on_preps, dense_softmax

IMPROVEMENT_THRESHOLD = 1e-6
EVAL_CHUNK = 256  # rows per forward pass when scoring a whole dataset


@dataclass
class TrainConfig:
    max_epochs: int = 100
    batch_size: int = 16
    initial_lr: float = 0.01
    lr_factor: float = 0.1
    lr_patience: int = 3
    stop_patience: int = 4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.max_epochs, self.batch_size, self.lr_patience, self.stop_patience) < 1:
            raise ValueError("epochs, batch size and patience values must be >= 1")
        if self.initial_lr <= 0 or self.adam_eps <= 0:
            raise ValueError("learning rate and eps must be positive")
        if not 0.0 < self.lr_factor < 1.0:
            raise ValueError("lr_factor must lie in (0, 1)")
        if not (0.0 <= self.adam_beta1 < 1.0 and 0.0 <= self.adam_beta2 < 1.0):
            raise ValueError("Adam betas must lie in [0, 1)")


@dataclass
class AdamState:
    m_theta: np.ndarray
    v_theta: np.ndarray
    m_weights: np.ndarray
    v_weights: np.ndarray
    m_biases: np.ndarray
    v_biases: np.ndarray
    step: int = 0


def zero_adam_state(model: ModelParameters) -> AdamState:
    return AdamState(
        np.zeros_like(model.theta), np.zeros_like(model.theta),
        np.zeros_like(model.dense.weights), np.zeros_like(model.dense.weights),
        np.zeros_like(model.dense.biases), np.zeros_like(model.dense.biases),
    )


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float
    val_accuracy: float
    learning_rate: float
    seconds: float


@dataclass
class History:
    epochs: list[EpochRecord] = field(default_factory=list)

    def best_epoch(self) -> int:
        """1-based epoch index with the lowest validation loss."""
        losses = [rec.val_loss for rec in self.epochs]
        return int(np.argmin(losses)) + 1

    def payload(self, include_timing: bool = False) -> list[dict]:
        """Deterministic serializable form; timing is opt-in because wall
        time is the one field two identical runs will not reproduce."""
        out = []
        for rec in self.epochs:
            row = {
                "epoch": rec.epoch,
                "train_loss": rec.train_loss,
                "train_accuracy": rec.train_accuracy,
                "val_loss": rec.val_loss,
                "val_accuracy": rec.val_accuracy,
                "learning_rate": rec.learning_rate,
            }
            if include_timing:
                row["seconds"] = rec.seconds
            out.append(row)
        return out


def adam_step(params: ModelParameters, grads, state: AdamState, lr: float,
              beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> tuple[ModelParameters, AdamState]:
    """One bias-corrected Adam update over theta, weights and biases."""
    t = state.step + 1
    c1 = 1.0 - beta1 ** t
    c2 = 1.0 - beta2 ** t

    def update(p, g, m, v):
        if p.shape != g.shape:
            raise ValueError("gradient shape does not match parameter shape")
        m_new = beta1 * m + (1.0 - beta1) * g
        v_new = beta2 * v + (1.0 - beta2) * g * g
        p_new = p - lr * (m_new / c1) / (np.sqrt(v_new / c2) + eps)
        return p_new, m_new, v_new

    theta, m_t, v_t = update(params.theta, grads.d_theta, state.m_theta, state.v_theta)
    weights, m_w, v_w = update(params.dense.weights, grads.d_weights,
                               state.m_weights, state.v_weights)
    biases, m_b, v_b = update(params.dense.biases, grads.d_biases,
                              state.m_biases, state.v_biases)
    new_params = ModelParameters(theta, type(params.dense)(weights, biases))
    return new_params, AdamState(m_t, v_t, m_w, v_w, m_b, v_b, t)


def _score_preps(preps: np.ndarray, labels: np.ndarray, model: ModelParameters,
                 spec: AnsatzSpec) -> tuple[float, float, np.ndarray]:
    """Mean loss, accuracy and argmax predictions over encoded preps."""
    losses = np.empty(labels.shape[0])
    preds = np.empty(labels.shape[0], dtype=np.int64)
    for start in range(0, labels.shape[0], EVAL_CHUNK):
        stop = start + EVAL_CHUNK
        exps = forward_batch(preps[start:stop], spec, model.theta)
        probs = dense_softmax(exps, model.dense)
        rows = np.arange(probs.shape[0])
        picked = np.maximum(probs[rows, labels[start:stop]], 1e-12)
        losses[start:stop] = -np.log(picked)
        preds[start:stop] = probs.argmax(axis=1)
    accuracy = float((preds == labels).mean())
    return float(losses.mean()), accuracy, preds


def evaluate(model: ModelParameters, ds: Dataset, spec: AnsatzSpec,
             encoder) -> tuple[float, float, np.ndarray]:
    """Mean loss, accuracy and per-row predictions (argmax, lowest index wins)."""
    if len(ds) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    preps = encoder.encode_batch(ds.features)
    return _score_preps(preps, ds.labels, model, spec)


def train(model: ModelParameters, split: SplitDataset, spec: AnsatzSpec,
          encoder, config: TrainConfig,
          progress=sys.stdout) -> tuple[ModelParameters, History]:
    """Run the full protocol and return (best-validation parameters, history).

    Encoded prep states are computed once up front (they do not depend on the
    trainable parameters). Per-epoch progress lines go to `progress` as
    tab-separated "epoch train_loss train_acc val_loss val_acc lr"; pass
    None to silence them.
    """
    train_preps = encoder.encode_batch(split.train.features)
    val_preps = encoder.encode_batch(split.test.features)
    train_labels, val_labels = split.train.labels, split.test.labels

    params = model.copy()
    state = zero_adam_state(params)
    lr = config.initial_lr
    history = History()
    monitor_best = np.inf  # thresholded: drives the patience counters
    lowest_loss = np.inf   # exact: drives the returned weights
    best_params = params.copy()
    plateau_wait = 0
    stop_wait = 0

    for epoch in range(1, config.max_epochs + 1):
        started = time.perf_counter()
        loss_sum = 0.0
        hit_sum = 0
        for idx in batches(split.train, config.batch_size, [config.seed, epoch]):
            loss, grads, probs = chain_on_preps(
                train_preps[idx], train_labels[idx], params, spec
            )
            loss_sum += loss * idx.size
            hit_sum += int((probs.argmax(axis=1) == train_labels[idx]).sum())
            params, state = adam_step(
                params, grads, state, lr,
                beta1=config.adam_beta1, beta2=config.adam_beta2, eps=config.adam_eps,
            )

        train_loss = loss_sum / len(split.train)
        train_acc = hit_sum / len(split.train)
        val_loss, val_acc, _ = _score_preps(val_preps, val_labels, params, spec)
        seconds = time.perf_counter() - started
        history.epochs.append(EpochRecord(
            epoch, float(train_loss), float(train_acc),
            float(val_loss), float(val_acc), float(lr), float(seconds),
        ))
        if progress is not None:
            progress.write(
                f"{epoch}\t{train_loss:.6f}\t{train_acc:.4f}"
                f"\t{val_loss:.6f}\t{val_acc:.4f}\t{lr:.6g}\n"
            )
            progress.flush()

        if val_loss < lowest_loss:
            lowest_loss = val_loss
            best_params = params.copy()
        if val_loss < monitor_best - IMPROVEMENT_THRESHOLD:
            monitor_best = val_loss
            plateau_wait = 0
            stop_wait = 0
        else:
            plateau_wait += 1
            stop_wait += 1
            if stop_wait >= config.stop_patience:
                break
            if plateau_wait >= config.lr_patience:
                lr *= config.lr_factor
                plateau_wait = 0

    return best_params, history
