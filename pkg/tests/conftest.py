import os

import numpy as np
import pytest

DIGITS_CSV = os.path.join(os.path.dirname(__file__), os.pardir, "data", "digits.csv")

_acceptance_results = {}


@pytest.fixture(scope="session")
def digits_path() -> str:
    return os.path.abspath(DIGITS_CSV)


@pytest.fixture(scope="session")
def digits(digits_path):
    from plateau_lab.data import load_csv

    return load_csv(digits_path)


def random_unit_amplitudes(rng: np.random.Generator, num_qubits: int,
                           complex_valued: bool = True) -> np.ndarray:
    dim = 1 << num_qubits
    raw = rng.standard_normal(dim)
    if complex_valued:
        raw = raw + 1j * rng.standard_normal(dim)
    return raw / np.linalg.norm(raw)


def record_criterion(number: int, label: str, passed: bool, detail: str = "") -> None:
    _acceptance_results[number] = (label, passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        label, passed, detail = _acceptance_results[number]
        verdict = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {number:2d} [{verdict}] {label}{suffix}")
