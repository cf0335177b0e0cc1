"""Digit dataset loading, train/test splitting, PCA, and batch iteration.

The expected CSV layout is 64 numeric feature columns (8x8 pixel intensities,
0-16) followed by one integer label column in 0-9; a single header line is
tolerated. The bundled `data/digits.csv` is a one-time export of the standard
1797-sample handwritten-digits set (see README for provenance).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

NUM_FEATURES = 64
NUM_CLASSES = 10


@dataclass
class Dataset:
    """Feature matrix plus integer labels, row-aligned."""

    features: np.ndarray  # (M, F) float64
    labels: np.ndarray    # (M,) int64

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or self.labels.ndim != 1:
            raise ValueError("features must be 2-D and labels 1-D")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("feature rows and labels differ in length")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= NUM_CLASSES):
            raise ValueError(f"labels must lie in 0..{NUM_CLASSES - 1}")

    def __len__(self) -> int:
        return self.features.shape[0]

    def take(self, indices) -> "Dataset":
        idx = np.asarray(indices)
        return Dataset(self.features[idx], self.labels[idx])

    def head(self, count: int) -> "Dataset":
        return Dataset(self.features[:count], self.labels[:count])


@dataclass
class SplitDataset:
    train: Dataset
    test: Dataset
    seed: int


@dataclass
class PcaModel:
    """Centering vector plus orthonormal components in descending-variance order."""

    mean: np.ndarray                 # (F,)
    components: np.ndarray           # (k, F), orthonormal rows
    explained_variances: np.ndarray  # (k,), non-increasing


def load_csv(path: str) -> Dataset:
    """Load a 65-column digits CSV; malformed rows raise with their line number."""
    features: list[list[float]] = []
    labels: list[int] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1:
                try:
                    float(row[0])
                except ValueError:
                    continue  # header line
            if len(row) != NUM_FEATURES + 1:
                raise ValueError(
                    f"row {lineno}: expected {NUM_FEATURES + 1} columns, got {len(row)}"
                )
            try:
                values = [float(cell) for cell in row]
            except ValueError as exc:
                raise ValueError(f"row {lineno}: non-numeric cell ({exc})") from None
            label = values[-1]
            if label != int(label) or not 0 <= label < NUM_CLASSES:
                raise ValueError(f"row {lineno}: label {row[-1]!r} not an integer in 0-9")
            if not all(np.isfinite(values)):
                raise ValueError(f"row {lineno}: non-finite value")
            features.append(values[:-1])
            labels.append(int(label))
    if not features:
        raise ValueError(f"{path}: no data rows")
    return Dataset(np.array(features), np.array(labels))


def split(ds: Dataset, train_fraction: float = 0.75, seed: int = 0) -> SplitDataset:
    """Seeded shuffle then partition; train size = floor(fraction * M)."""
    m = len(ds)
    if m < 2:
        raise ValueError("need at least 2 rows to split")
    n_train = int(train_fraction * m)
    if not 1 <= n_train < m:
        raise ValueError(f"degenerate split: {n_train} train rows out of {m}")
    perm = np.random.default_rng(seed).permutation(m)
    return SplitDataset(ds.take(perm[:n_train]), ds.take(perm[n_train:]), seed)


def pca_fit(features: np.ndarray, k: int) -> PcaModel:
    """Top-k principal directions of the column-centered sample covariance.

    Covariance uses the (rows - 1) divisor. Each component's sign is fixed so
    its largest-magnitude entry is positive, keeping projections reproducible.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("features must be a 2-D matrix")
    rows, cols = x.shape
    if not 1 <= k <= cols:
        raise ValueError(f"k must lie in 1..{cols}, got {k}")
    if rows < max(2, k):
        raise ValueError(f"need at least max(2, k) rows to fit PCA, got {rows}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (rows - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)  # ascending
    order = np.argsort(eigvals)[::-1][:k]
    variances = np.maximum(eigvals[order], 0.0)  # clamp eigh round-off
    components = eigvecs[:, order].T.copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return PcaModel(mean, components, variances)


def pca_transform(model: PcaModel, x: np.ndarray) -> np.ndarray:
    """Project one vector (F,) or a matrix (M, F) onto the fitted components."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape[-1] != model.mean.shape[0]:
        raise ValueError(
            f"expected {model.mean.shape[0]} features, got {arr.shape[-1]}"
        )
    return (arr - model.mean) @ model.components.T


def batches(ds: Dataset, batch_size: int = 16, epoch_seed=0) -> list[np.ndarray]:
    """Seeded shuffled index batches covering every row exactly once.

    The final partial batch is kept. `epoch_seed` may be an int or a sequence
    of ints (handy for deriving per-epoch streams from one run seed).
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    perm = np.random.default_rng(epoch_seed).permutation(len(ds))
    return [perm[i:i + batch_size] for i in range(0, len(perm), batch_size)]
