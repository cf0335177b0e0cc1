"""Classification metrics and the gradient-variance probe.

The variance scan is the standard barren-plateau diagnostic: draw random
parameter vectors, differentiate <Z_0> with respect to the first angle via
the shift rule, and report the two-moment variance mean(g^2) - mean(g)^2 per
circuit width.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import AnsatzSpec, evolve, parameter_count
from .gradient import SHIFT
from .simulator import z_expectations, zero_state_batch

NUM_CLASSES = 10


def confusion(true_labels, predicted_labels) -> np.ndarray:
    """10x10 count matrix; entry (t, p) = rows with true class t predicted p."""
    y_true = np.asarray(true_labels, dtype=np.int64).reshape(-1)
    y_pred = np.asarray(predicted_labels, dtype=np.int64).reshape(-1)
    if y_true.size == 0:
        raise ValueError("cannot build a confusion matrix from empty inputs")
    if y_true.shape != y_pred.shape:
        raise ValueError("label sequences differ in length")
    for name, arr in (("true", y_true), ("predicted", y_pred)):
        if arr.min() < 0 or arr.max() >= NUM_CLASSES:
            raise ValueError(f"{name} labels out of range 0..{NUM_CLASSES - 1}")
    cm = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    np.add.at(cm, (y_true, y_pred), 1)
    return cm


@dataclass
class MetricsReport:
    accuracy: float
    precision: np.ndarray  # (10,) per class
    recall: np.ndarray
    f1: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f1: float


def metrics(cm: np.ndarray) -> MetricsReport:
    """Per-class and macro precision/recall/F1 from a confusion matrix.

    Zero-denominator cases score 0; macro averages run over classes with
    nonzero support (true-row sum) only.
    """
    cm = np.asarray(cm, dtype=np.int64)
    total = cm.sum()
    if total == 0:
        raise ValueError("confusion matrix is empty")
    tp = np.diag(cm).astype(np.float64)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(tp + fp > 0, tp / (tp + fp), 0.0)
        recall = np.where(tp + fn > 0, tp / (tp + fn), 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2.0 * precision * recall / np.where(pr > 0, pr, 1.0), 0.0)
    support = cm.sum(axis=1) > 0
    return MetricsReport(
        accuracy=float(np.trace(cm) / total),
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=float(precision[support].mean()),
        macro_recall=float(recall[support].mean()),
        macro_f1=float(f1[support].mean()),
    )


@dataclass
class VarianceScanPoint:
    width: int
    depth: int
    entanglement: str
    samples: int
    variance: float
    stderr: float  # sampling standard error of the variance estimate


def bp_variance_scan(widths, depth: int, entanglement: str, samples: int,
                     seed: int) -> list[VarianceScanPoint]:
    """Gradient variance of d<Z_0>/d(theta first layer, qubit 0) per width.

    For each width, `samples` parameter vectors are drawn uniformly on
    [0, 2*pi) from a per-width stream derived from `seed`, the circuit runs
    on |0...0>, and the derivative comes from one +pi/2 / -pi/2 shift pair.
    Results are independent of the order widths are listed in.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples to estimate a variance")
    points = []
    for width in widths:
        width = int(width)
        spec = AnsatzSpec(width, depth, entanglement)
        rng = np.random.default_rng([seed, width, depth])
        thetas = rng.uniform(0.0, 2.0 * np.pi, (samples, parameter_count(spec)))

        shifted = thetas.copy()
        values = {}
        for sign in (1.0, -1.0):
            shifted[:, 0] = thetas[:, 0] + sign * SHIFT
            amps = zero_state_batch(samples, width)
            evolve(amps, spec, shifted)  # per-row angles, one circuit per sample
            values[sign] = z_expectations(amps, width)[:, 0]
        gradients = (values[1.0] - values[-1.0]) / 2.0

        variance = float(np.mean(gradients ** 2) - np.mean(gradients) ** 2)
        centered = gradients - gradients.mean()
        m2 = float(np.mean(centered ** 2))
        m4 = float(np.mean(centered ** 4))
        stderr = float(np.sqrt(max(m4 - m2 * m2, 0.0) / samples))
        points.append(VarianceScanPoint(width, depth, entanglement,
                                        samples, variance, stderr))
    return points


def scan_to_csv_rows(points: list[VarianceScanPoint]) -> list[str]:
    """RFC-4180 lines for the scan: width, depth, entanglement, samples, variance."""
    rows = ["width,depth,entanglement,samples,variance"]
    for p in points:
        rows.append(f"{p.width},{p.depth},{p.entanglement},{p.samples},{p.variance!r}")
    return rows
