"""Experiment orchestration: single runs, grid sweeps, and report generation.

Each completed run appends one self-describing JSON line to
`<out_dir>/records.jsonl`; replaying the embedded config and seed reproduces
the stored history exactly (wall-clock seconds are the only field left out of
that guarantee). Sweeps are resumable: cells whose key already has an "ok"
record are skipped. Reports are pure functions of the record set.
"""
from __future__ import annotations

import configparser
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .ansatz import AnsatzSpec, init_parameters
from .data import Dataset, load_csv, pca_fit, pca_transform, split
from .encoding import AmplitudeEncoder, AngleEncoder, scaler_fit
from .evaluation import confusion, metrics
from .head import ModelParameters, init_dense
from .simulator import MAX_QUBITS
from .training import TrainConfig, evaluate, train

ENCODINGS = ("amplitude", "angle")
ENTANGLEMENTS = ("ring", "none")
RECORDS_FILENAME = "records.jsonl"

AMPLITUDE_MIN_WIDTH = 6  # 2**n must hold all 64 raw features
ANGLE_MIN_WIDTH = 8      # below this, PCA discards too much signal


class ConfigError(Exception):
    """An experiment configuration violates one of its rules."""


@dataclass
class ExperimentConfig:
    encoding: str
    entanglement: str
    width: int
    depth: int
    seeds: tuple[int, ...] = (1,)
    train: TrainConfig = field(default_factory=TrainConfig)
    data_path: str = ""
    out_dir: str = "results"
    subset: int | None = None

    def __post_init__(self) -> None:
        self.seeds = tuple(int(s) for s in self.seeds)
        self.validate()

    def validate(self) -> None:
        if self.encoding not in ENCODINGS:
            raise ConfigError(f"unknown encoding {self.encoding!r}; use amplitude or angle")
        if self.entanglement not in ENTANGLEMENTS:
            raise ConfigError(f"unknown entanglement {self.entanglement!r}; use ring or none")
        if not 1 <= self.depth:
            raise ConfigError("depth must be >= 1")
        if self.width > MAX_QUBITS:
            raise ConfigError(f"width {self.width} exceeds the {MAX_QUBITS}-qubit bound")
        if self.encoding == "amplitude" and self.width < AMPLITUDE_MIN_WIDTH:
            raise ConfigError(
                f"amplitude encoding of 64 features requires width >= {AMPLITUDE_MIN_WIDTH}"
                f" (needs 2**n >= 64), got {self.width}"
            )
        if self.encoding == "angle" and self.width < ANGLE_MIN_WIDTH:
            raise ConfigError(
                f"angle encoding requires width >= {ANGLE_MIN_WIDTH}, got {self.width}"
            )
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.subset is not None and self.subset < 2:
            raise ConfigError("subset must keep at least 2 rows")

    def key(self) -> str:
        """Semantic identity of the cell; excludes file-system locations."""
        t = self.train
        train_part = (
            f"lr{t.initial_lr:g}x{t.lr_factor:g}p{t.lr_patience}s{t.stop_patience}"
            f"b{t.batch_size}e{t.max_epochs}m{t.adam_beta1:g},{t.adam_beta2:g},{t.adam_eps:g}"
        )
        seeds = ",".join(str(s) for s in self.seeds)
        subset = "full" if self.subset is None else str(self.subset)
        return (f"{self.encoding}|{self.entanglement}|n{self.width}|m{self.depth}"
                f"|seeds{seeds}|subset{subset}|{train_part}")

    def echo(self) -> dict:
        body = {
            "encoding": self.encoding,
            "entanglement": self.entanglement,
            "width": self.width,
            "depth": self.depth,
            "seeds": list(self.seeds),
            "subset": self.subset,
            "data_path": self.data_path,
            "train": asdict(self.train),
        }
        return body


def config_from_echo(echo: dict, out_dir: str = "results") -> ExperimentConfig:
    train = TrainConfig(**echo["train"])
    return ExperimentConfig(
        encoding=echo["encoding"], entanglement=echo["entanglement"],
        width=echo["width"], depth=echo["depth"], seeds=tuple(echo["seeds"]),
        train=train, data_path=echo["data_path"], out_dir=out_dir,
        subset=echo["subset"],
    )


def derive_seeds(run_seed: int) -> tuple[int, int, int, int]:
    """Expand one run seed into (split, theta init, dense init, shuffle) seeds."""
    state = np.random.SeedSequence(run_seed).generate_state(4)
    return tuple(int(v) for v in state)


def build_pipeline(train_ds: Dataset, cfg: ExperimentConfig):
    """Fitted encoder for the configured feature map (PCA/scaler on train only)."""
    if cfg.encoding == "amplitude":
        return AmplitudeEncoder(cfg.width)
    pca = pca_fit(train_ds.features, cfg.width)
    scaler = scaler_fit(pca_transform(pca, train_ds.features))
    return AngleEncoder(cfg.width, pca, scaler)


def _single_run(ds: Dataset, cfg: ExperimentConfig, run_seed: int) -> dict:
    split_seed, theta_seed, dense_seed, shuffle_seed = derive_seeds(run_seed)
    sd = split(ds, 0.75, split_seed)
    spec = AnsatzSpec(cfg.width, cfg.depth, cfg.entanglement)
    encoder = build_pipeline(sd.train, cfg)
    model = ModelParameters(
        init_parameters(spec, theta_seed), init_dense(cfg.width, dense_seed)
    )
    train_cfg = replace(cfg.train, seed=shuffle_seed)
    best, history = train(model, sd, spec, encoder, train_cfg, progress=sys.stderr)
    test_loss, test_accuracy, predictions = evaluate(best, sd.test, spec, encoder)
    report = metrics(confusion(sd.test.labels, predictions))
    return {
        "seed": run_seed,
        "best_epoch": history.best_epoch(),
        "epochs_run": len(history.epochs),
        "history": history.payload(),
        "final": {
            "test_loss": test_loss,
            "test_accuracy": test_accuracy,
            "macro_precision": report.macro_precision,
            "macro_recall": report.macro_recall,
            "macro_f1": report.macro_f1,
            "per_class_precision": report.precision.tolist(),
            "per_class_recall": report.recall.tolist(),
            "per_class_f1": report.f1.tolist(),
        },
    }


def run_experiment(cfg: ExperimentConfig, persist: bool = True) -> dict:
    """Train every configured seed and return (and by default persist) a record."""
    cfg.validate()
    started = time.perf_counter()
    ds = load_csv(cfg.data_path)
    if cfg.subset is not None:
        ds = ds.head(cfg.subset)
    runs = [_single_run(ds, cfg, seed) for seed in cfg.seeds]
    accuracies = [r["final"]["test_accuracy"] for r in runs]
    record = {
        "status": "ok",
        "key": cfg.key(),
        "config": cfg.echo(),
        "runs": runs,
        "aggregate": {
            "mean_test_accuracy": float(np.mean(accuracies)),
            "std_test_accuracy": float(np.std(accuracies)),
        },
        "wall_seconds": time.perf_counter() - started,
        "versions": {"plateau_lab": _package_version(), "numpy": np.__version__},
    }
    if persist:
        append_record(cfg.out_dir, record)
    return record


def _package_version() -> str:
    from . import __version__

    return __version__


def records_path(out_dir: str) -> str:
    return os.path.join(out_dir, RECORDS_FILENAME)


def append_record(out_dir: str, record: dict) -> None:
    """Append one JSON line; a single flushed write keeps the file parseable."""
    os.makedirs(out_dir, exist_ok=True)
    line = json.dumps(record, sort_keys=True) + "\n"
    with open(records_path(out_dir), "a", encoding="utf-8") as fh:
        fh.write(line)
        fh.flush()
        os.fsync(fh.fileno())


def read_records(out_dir: str, status: str = "ok") -> list[dict]:
    """All records with the given status; later lines win on duplicate keys."""
    path = records_path(out_dir)
    if not os.path.exists(path):
        return []
    by_key: dict[str, dict] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec.get("status") == status:
                by_key[rec["key"]] = rec
    return list(by_key.values())


def _run_worker(cfg: ExperimentConfig) -> dict:
    return run_experiment(cfg, persist=False)


def run_sweep(configs: list[ExperimentConfig], jobs: int = 1) -> list[dict]:
    """Execute every missing cell, record errors without stopping, summarize.

    Cells are independent and internally deterministic, so `jobs > 1` cannot
    change any result; the parent process stays the only record writer.
    """
    if not configs:
        raise ConfigError("sweep grid is empty")
    done_keys = set()
    for out_dir in {cfg.out_dir for cfg in configs}:
        done_keys.update(rec["key"] for rec in read_records(out_dir))
    pending = [cfg for cfg in configs if cfg.key() not in done_keys]
    records = []

    def on_done(cfg: ExperimentConfig, record: dict) -> None:
        append_record(cfg.out_dir, record)
        records.append(record)

    def on_error(cfg: ExperimentConfig, exc: Exception) -> None:
        print(f"sweep cell failed ({cfg.key()}): {exc}", file=sys.stderr)
        append_record(cfg.out_dir, {
            "status": "error", "key": cfg.key(), "config": cfg.echo(),
            "error": f"{type(exc).__name__}: {exc}",
        })

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_run_worker, cfg): cfg for cfg in pending}
            for future, cfg in futures.items():
                try:
                    on_done(cfg, future.result())
                except Exception as exc:  # noqa: BLE001  (cell errors must not kill the sweep)
                    on_error(cfg, exc)
    else:
        for cfg in pending:
            try:
                on_done(cfg, run_experiment(cfg, persist=False))
            except Exception as exc:  # noqa: BLE001
                on_error(cfg, exc)

    for out_dir in {cfg.out_dir for cfg in configs}:
        write_summary(out_dir)
    return records


def default_grid(data_path: str, out_dir: str, seeds=(1, 2, 3),
                 train: TrainConfig | None = None, depths=(2, 4, 6, 8, 10),
                 subset: int | None = None) -> list[ExperimentConfig]:
    """The stock experiment grid over width, depth, encoding and coupling.

    Amplitude runs start at the 6-qubit capacity floor and angle runs at 8
    qubits; the unentangled-amplitude family stops at width 12.
    """
    train = train or TrainConfig()
    widths = {
        ("amplitude", "ring"): (6, 8, 10, 12, 14),
        ("amplitude", "none"): (6, 8, 10, 12),
        ("angle", "ring"): (8, 10, 12, 14),
        ("angle", "none"): (8, 10, 12, 14),
    }
    grid = []
    for (encoding, entanglement), ns in widths.items():
        for width in ns:
            for depth in depths:
                grid.append(ExperimentConfig(
                    encoding=encoding, entanglement=entanglement, width=width,
                    depth=depth, seeds=seeds, train=train, data_path=data_path,
                    out_dir=out_dir, subset=subset,
                ))
    return grid


def _cells(records: list[dict]) -> list[dict]:
    """One aggregated row per record: sweep cell plus derived tie-break data."""
    rows = []
    for rec in records:
        cfg = rec["config"]
        finals = [run["final"] for run in rec["runs"]]
        width, depth = cfg["width"], cfg["depth"]
        rows.append({
            "encoding": cfg["encoding"],
            "entanglement": cfg["entanglement"],
            "width": width,
            "depth": depth,
            "seeds": len(rec["runs"]),
            "mean_accuracy": rec["aggregate"]["mean_test_accuracy"],
            "std_accuracy": rec["aggregate"]["std_test_accuracy"],
            "macro_precision": float(np.mean([f["macro_precision"] for f in finals])),
            "macro_recall": float(np.mean([f["macro_recall"] for f in finals])),
            "macro_f1": float(np.mean([f["macro_f1"] for f in finals])),
            "parameters": width * depth + 10 * width + 10,
            "convergence_epoch": float(np.mean([run["best_epoch"] for run in rec["runs"]])),
        })
    rows.sort(key=lambda r: (r["encoding"], r["entanglement"], r["width"], r["depth"]))
    return rows


def write_summary(out_dir: str) -> str | None:
    """summary.csv: one row per (encoding, entanglement, width, depth) cell."""
    records = read_records(out_dir)
    if not records:
        return None
    rows = _cells(records)
    path = os.path.join(out_dir, "summary.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("encoding,entanglement,width,depth,seeds,mean_accuracy,"
                 "std_accuracy,macro_precision,macro_recall,macro_f1\n")
        for r in rows:
            fh.write(f"{r['encoding']},{r['entanglement']},{r['width']},{r['depth']},"
                     f"{r['seeds']},{r['mean_accuracy']:.6f},{r['std_accuracy']:.6f},"
                     f"{r['macro_precision']:.6f},{r['macro_recall']:.6f},"
                     f"{r['macro_f1']:.6f}\n")
    return path


def _pivot_csv(rows: list[dict], x_key: str, col_key: str, path: str) -> str:
    xs = sorted({r[x_key] for r in rows})
    cols = sorted({r[col_key] for r in rows})
    lookup = {(r[x_key], r[col_key]): r["mean_accuracy"] for r in rows}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(x_key + "," + ",".join(f"{col_key}={c}" for c in cols) + "\n")
        for x in xs:
            cells = [f"{lookup[(x, c)]:.6f}" if (x, c) in lookup else "" for c in cols]
            fh.write(f"{x}," + ",".join(cells) + "\n")
    return path


def _recommendations(rows: list[dict]) -> list[tuple[str, str, dict]]:
    """Best cell per constraint scenario: accuracy, then fewer parameters,
    then earlier convergence, then a stable config order."""

    def best(candidates: list[dict]) -> dict | None:
        if not candidates:
            return None
        return min(candidates, key=lambda r: (
            -r["mean_accuracy"], r["parameters"], r["convergence_epoch"],
            r["encoding"], r["entanglement"], r["width"], r["depth"],
        ))

    scenarios: list[tuple[str, str, dict | None]] = [("no_constraint", "", best(rows))]
    for encoding in sorted({r["encoding"] for r in rows}):
        scenarios.append(("encoding", encoding,
                          best([r for r in rows if r["encoding"] == encoding])))
    for ent in sorted({r["entanglement"] for r in rows}):
        scenarios.append(("entanglement", ent,
                          best([r for r in rows if r["entanglement"] == ent])))
    for width in sorted({r["width"] for r in rows}):
        scenarios.append(("width", str(width),
                          best([r for r in rows if r["width"] == width])))
    for depth in sorted({r["depth"] for r in rows}):
        scenarios.append(("depth", str(depth),
                          best([r for r in rows if r["depth"] == depth])))
    return [(name, constraint, row) for name, constraint, row in scenarios if row]


def report(records_dir: str) -> list[str]:
    """Regenerate every report table and figure from the stored records.

    Emits per-(encoding, entanglement) accuracy-vs-width and accuracy-vs-depth
    tables, the ring-vs-none accuracy deltas per encoding, and the
    best-configuration table per constraint scenario, each CSV with a PNG
    rendering beside it.
    """
    from . import figures  # deferred: pulls in matplotlib

    records = read_records(records_dir)
    if not records:
        raise FileNotFoundError(f"no completed records found under {records_dir!r}")
    rows = _cells(records)
    report_dir = os.path.join(records_dir, "report")
    os.makedirs(report_dir, exist_ok=True)
    written: list[str] = []

    def out(name: str) -> str:
        return os.path.join(report_dir, name)

    for encoding in sorted({r["encoding"] for r in rows}):
        for ent in sorted({r["entanglement"] for r in rows}):
            sub = [r for r in rows if r["encoding"] == encoding and r["entanglement"] == ent]
            if not sub:
                continue
            tag = f"{encoding}__{ent}"
            written.append(_pivot_csv(sub, "width", "depth", out(f"accuracy_vs_width__{tag}.csv")))
            written.append(_pivot_csv(sub, "depth", "width", out(f"accuracy_vs_depth__{tag}.csv")))
            title = f"{encoding} encoding, {ent} coupling"
            written.append(figures.accuracy_trend_figure(
                sub, "width", "depth", title, out(f"accuracy_vs_width__{tag}.png")))
            written.append(figures.accuracy_trend_figure(
                sub, "depth", "width", title, out(f"accuracy_vs_depth__{tag}.png")))

    for encoding in sorted({r["encoding"] for r in rows}):
        ring = {(r["width"], r["depth"]): r for r in rows
                if r["encoding"] == encoding and r["entanglement"] == "ring"}
        none = {(r["width"], r["depth"]): r for r in rows
                if r["encoding"] == encoding and r["entanglement"] == "none"}
        shared = sorted(set(ring) & set(none))
        if not shared:
            continue
        delta_rows = [{
            "width": w, "depth": d,
            "ring_accuracy": ring[(w, d)]["mean_accuracy"],
            "none_accuracy": none[(w, d)]["mean_accuracy"],
            "delta": ring[(w, d)]["mean_accuracy"] - none[(w, d)]["mean_accuracy"],
        } for w, d in shared]
        path = out(f"entanglement_delta__{encoding}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("width,depth,ring_accuracy,none_accuracy,delta\n")
            for r in delta_rows:
                fh.write(f"{r['width']},{r['depth']},{r['ring_accuracy']:.6f},"
                         f"{r['none_accuracy']:.6f},{r['delta']:+.6f}\n")
        written.append(path)
        written.append(figures.entanglement_delta_figure(
            delta_rows, f"{encoding} encoding: ring minus none",
            out(f"entanglement_delta__{encoding}.png")))

    rec_path = out("recommendations.csv")
    with open(rec_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("scenario,constraint,encoding,entanglement,width,depth,"
                 "mean_accuracy,trainable_parameters,convergence_epoch\n")
        for name, constraint, row in _recommendations(rows):
            fh.write(f"{name},{constraint},{row['encoding']},{row['entanglement']},"
                     f"{row['width']},{row['depth']},{row['mean_accuracy']:.6f},"
                     f"{row['parameters']},{row['convergence_epoch']:.1f}\n")
    written.append(rec_path)
    return written


def load_config_file(path: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")
    return parser
