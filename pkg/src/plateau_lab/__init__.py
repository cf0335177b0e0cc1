"""Hybrid quantum-classical classifier lab.

Exact statevector simulation of Ry/CNOT circuits, amplitude and angle feature
maps, parameter-shift training of a softmax read-out, and a sweep harness for
width/depth/encoding/entanglement trainability studies with gradient-variance
diagnostics.
"""

__version__ = "0.1.0"

from .ansatz import AnsatzSpec, apply_ansatz, init_parameters, parameter_count
from .data import Dataset, PcaModel, SplitDataset, batches, load_csv, pca_fit, pca_transform, split
from .encoding import (AmplitudeEncoder, AngleEncoder, AngleScaler, amplitude_encode,
                       angle_encode, scaler_apply, scaler_fit)
from .evaluation import MetricsReport, VarianceScanPoint, bp_variance_scan, confusion, metrics
from .gradient import finite_difference_jacobian, forward, parameter_shift_jacobian
from .harness import (ConfigError, ExperimentConfig, default_grid, report,
                      run_experiment, run_sweep)
from .head import (DenseParams, LossGradients, ModelParameters, batch_loss_and_gradients,
                   cross_entropy, dense_softmax, init_dense, loss_and_gradients)
from .simulator import (StateVector, apply_cnot, apply_ry, expectation_z,
                        expectation_z_all, set_amplitudes, zero_state)
from .training import AdamState, History, TrainConfig, adam_step, evaluate, train

__all__ = [
    "AdamState", "AmplitudeEncoder", "AngleEncoder", "AngleScaler", "AnsatzSpec",
    "ConfigError", "Dataset", "DenseParams", "ExperimentConfig", "History",
    "LossGradients", "MetricsReport", "ModelParameters", "PcaModel", "SplitDataset",
    "StateVector", "TrainConfig", "VarianceScanPoint", "adam_step", "amplitude_encode",
    "angle_encode", "apply_ansatz", "apply_cnot", "apply_ry", "batch_loss_and_gradients",
    "batches", "bp_variance_scan", "confusion", "cross_entropy", "default_grid",
    "dense_softmax", "evaluate", "expectation_z", "expectation_z_all",
    "finite_difference_jacobian", "forward", "init_dense", "init_parameters",
    "load_csv", "loss_and_gradients", "metrics", "parameter_count",
    "parameter_shift_jacobian", "pca_fit", "pca_transform", "report",
    "run_experiment", "run_sweep", "scaler_apply", "scaler_fit", "set_amplitudes",
    "split", "train", "zero_state",
]
