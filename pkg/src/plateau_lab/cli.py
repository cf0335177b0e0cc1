"""Command-line interface.

Subcommands: `train` (one experiment cell), `sweep` (grid of cells,
resumable), `bp-scan` (gradient-variance scan), `report` (tables + figures
from stored records). Progress and diagnostics go to stderr; machine output
goes to files and stdout. Exit codes: 0 success, 1 configuration/usage
error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .evaluation import bp_variance_scan, scan_to_csv_rows
from .figures import variance_scan_figure
from .harness import (ConfigError, ExperimentConfig, default_grid,
                      load_config_file, report, run_experiment, run_sweep,
                      write_summary)
from .training import TrainConfig

DATA_ENV_VAR = "PLATEAU_LAB_DATA"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); remap to exit 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="plateau-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--data", help=f"digits CSV path (or ${DATA_ENV_VAR})")
        p.add_argument("--out", default="results", help="output directory")
        p.add_argument("--config", help="key=value config file with sections")

    p_train = sub.add_parser("train", help="train one configuration")
    add_common(p_train)
    p_train.add_argument("--encoding", choices=("amplitude", "angle"))
    p_train.add_argument("--entanglement", choices=("ring", "none"))
    p_train.add_argument("--width", type=int)
    p_train.add_argument("--depth", type=int)
    p_train.add_argument("--seed", type=int)
    p_train.add_argument("--subset", type=int, help="truncate dataset to M rows")

    p_sweep = sub.add_parser("sweep", help="run the experiment grid (resumable)")
    add_common(p_sweep)
    p_sweep.add_argument("--seed", type=int, action="append", dest="seeds")
    p_sweep.add_argument("--subset", type=int)
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_scan = sub.add_parser("bp-scan", help="gradient-variance scan over widths")
    p_scan.add_argument("--widths", default="4,6,8,10", help="comma-separated widths")
    p_scan.add_argument("--depth", type=int, default=10)
    p_scan.add_argument("--samples", type=int, default=500)
    p_scan.add_argument("--seed", type=int, default=7)
    p_scan.add_argument("--entanglement", choices=("ring", "none"), default="ring")
    p_scan.add_argument("--out", help="directory for variance_scan.csv/.png")

    p_report = sub.add_parser("report", help="tables and figures from records")
    p_report.add_argument("--out", default="results", help="records directory")
    return parser


def _resolve_data(args) -> str:
    path = getattr(args, "data", None) or os.environ.get(DATA_ENV_VAR)
    if not path:
        raise ConfigError(f"no dataset given: pass --data or set ${DATA_ENV_VAR}")
    return path


def _file_settings(args) -> tuple[dict, dict, dict]:
    """(experiment, training, sweep) sections of --config, empty when absent."""
    if not getattr(args, "config", None):
        return {}, {}, {}
    parser = load_config_file(args.config)
    pick = lambda sec: dict(parser[sec]) if parser.has_section(sec) else {}
    return pick("experiment"), pick("training"), pick("sweep")


def _train_config(training: dict) -> TrainConfig:
    kwargs = {}
    int_keys = ("max_epochs", "batch_size", "lr_patience", "stop_patience", "seed")
    float_keys = ("initial_lr", "lr_factor", "adam_beta1", "adam_beta2", "adam_eps")
    for key, raw in training.items():
        if key in int_keys:
            kwargs[key] = int(raw)
        elif key in float_keys:
            kwargs[key] = float(raw)
        else:
            raise ConfigError(f"unknown [training] key {key!r}")
    return TrainConfig(**kwargs)


def _int_list(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in str(raw).replace(" ", "").split(",") if tok)
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list, got {raw!r}") from None


def _cmd_train(args) -> int:
    experiment, training, _ = _file_settings(args)
    pick = lambda flag, key, cast: (getattr(args, flag) if getattr(args, flag) is not None
                                    else cast(experiment[key]) if key in experiment else None)
    encoding = pick("encoding", "encoding", str)
    entanglement = pick("entanglement", "entanglement", str) or "ring"
    width = pick("width", "width", int)
    depth = pick("depth", "depth", int)
    seed = pick("seed", "seed", int)
    subset = pick("subset", "subset", int)
    if encoding is None or width is None or depth is None:
        raise ConfigError("train needs --encoding, --width and --depth (flags or config)")
    cfg = ExperimentConfig(
        encoding=encoding, entanglement=entanglement, width=width, depth=depth,
        seeds=(seed if seed is not None else 1,), train=_train_config(training),
        data_path=_resolve_data(args), out_dir=args.out, subset=subset,
    )
    record = run_experiment(cfg)
    write_summary(args.out)
    print(json.dumps(record, sort_keys=True))
    return 0


def _cmd_sweep(args) -> int:
    experiment, training, sweep_section = _file_settings(args)
    train_cfg = _train_config(training)
    seeds = tuple(args.seeds) if args.seeds else _int_list(sweep_section.get("seeds", "1,2,3"))
    depths = _int_list(sweep_section.get("depths", "2,4,6,8,10"))
    subset = args.subset if args.subset is not None else (
        int(sweep_section["subset"]) if "subset" in sweep_section else None)
    jobs = args.jobs if args.jobs != 1 else int(sweep_section.get("jobs", 1))
    data_path = _resolve_data(args)

    width_keys = {
        ("amplitude", "ring"): "amplitude_ring_widths",
        ("amplitude", "none"): "amplitude_none_widths",
        ("angle", "ring"): "angle_ring_widths",
        ("angle", "none"): "angle_none_widths",
    }
    if any(key in sweep_section for key in width_keys.values()):
        grid = []
        for (encoding, entanglement), key in width_keys.items():
            for width in _int_list(sweep_section.get(key, "")):
                for depth in depths:
                    grid.append(ExperimentConfig(
                        encoding=encoding, entanglement=entanglement,
                        width=width, depth=depth, seeds=seeds, train=train_cfg,
                        data_path=data_path, out_dir=args.out, subset=subset,
                    ))
    else:
        grid = default_grid(data_path, args.out, seeds=seeds, train=train_cfg,
                            depths=depths, subset=subset)
    if experiment:
        raise ConfigError("[experiment] section applies to `train`, not `sweep`")
    run_sweep(grid, jobs=jobs)
    print(os.path.join(args.out, "summary.csv"))
    return 0


def _cmd_bp_scan(args) -> int:
    widths = _int_list(args.widths)
    if not widths:
        raise ConfigError("bp-scan needs at least one width")
    points = bp_variance_scan(widths, args.depth, args.entanglement,
                              args.samples, args.seed)
    rows = scan_to_csv_rows(points)
    for row in rows:
        print(row)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        csv_path = os.path.join(args.out, "variance_scan.csv")
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(rows) + "\n")
        png_path = variance_scan_figure(points, os.path.join(args.out, "variance_scan.png"))
        print(f"wrote {csv_path} and {png_path}", file=sys.stderr)
    return 0


def _cmd_report(args) -> int:
    for path in report(args.out):
        print(path)
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "sweep": _cmd_sweep,
    "bp-scan": _cmd_bp_scan,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
