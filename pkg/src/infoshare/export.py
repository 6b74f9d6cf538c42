"""Byte-stable serialization of results and metrics.

Epoch tables are CSV with floats at 9 significant digits.  JSON documents
use Python's shortest round-trip float repr so metric artifacts re-import
exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .errors import FormatError
from .metrics import QualityReport, mean_cia
from .network import degree_summary
from .runner import RunResult

EPOCH_HEADER = (
    "epoch", "sim", "node", "cia", "attacked", "attack_id",
    "shared_count", "mean_payoff", "q_in", "q_out",
)
QUALITY_HEADER = ("node", "q_in", "q_out", "gain", "gained")


def fmt(x: float) -> str:
    return format(float(x), ".9g")


def write_json(doc: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc


def _write_csv(path: Path, header: Iterable[str], rows: Iterable[Iterable[Any]]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def epoch_table_name(sim: int) -> str:
    return f"sim_{sim:03d}.csv"


def export_result(result: RunResult, out_dir: str | Path) -> list[Path]:
    """Write ``summary.json`` plus one epoch table per simulation."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for sim in result.simulations:
        path = out / epoch_table_name(sim.index)
        _write_csv(path, EPOCH_HEADER, _epoch_rows(sim))
        written.append(path)

    summary = {
        "config": result.config.to_doc(),
        "policy": result.config.policy_label,
        "network": degree_summary(result.network),
        "seeds": result.seeds,
        "catalogues": [s.catalogue.to_dict()["impacts"] for s in result.simulations],
        "mean_cia": [float(x) for x in mean_cia(result)],
        "tables": [p.name for p in written],
    }
    path = out / "summary.json"
    write_json(summary, path)
    written.append(path)
    return written


def _epoch_rows(sim) -> Iterable[list[str]]:
    n = sim.values.shape[1]
    for row in range(sim.epochs):
        epoch = row + 1
        for node in range(n):
            attack = int(sim.attacks[row, node])
            yield [
                str(epoch), str(sim.index), str(node),
                fmt(sim.values[row, node]),
                "1" if attack >= 0 else "0",
                str(attack),
                str(int(sim.shared_count[row, node])),
                fmt(sim.mean_payoff[row, node]),
                str(int(sim.q_in[row, node])),
                str(int(sim.q_out[row, node])),
            ]


def load_epoch_values(results_dir: str | Path) -> np.ndarray:
    """CIA values from exported epoch tables, shape ``(simulations, epochs, n)``."""
    results_dir = Path(results_dir)
    tables = sorted(results_dir.glob("sim_*.csv"))
    if not tables:
        raise FormatError(f"{results_dir}: no epoch tables (sim_*.csv) found")
    stacks = []
    for path in tables:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if tuple(header or ()) != EPOCH_HEADER:
                raise FormatError(f"{path}: unexpected header {header}", line=1, column=1)
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                try:
                    rows.append((int(rec[0]), int(rec[2]), float(rec[3])))
                except (ValueError, IndexError):
                    raise FormatError(f"{path}: malformed row", line=lineno, column=1) from None
        epochs = max(r[0] for r in rows)
        n = max(r[1] for r in rows) + 1
        values = np.full((epochs, n), np.nan)
        for epoch, node, cia in rows:
            values[epoch - 1, node] = cia
        if np.isnan(values).any():
            raise FormatError(f"{path}: table is missing epoch/node rows")
        stacks.append(values)
    shapes = {v.shape for v in stacks}
    if len(shapes) != 1:
        raise FormatError(f"{results_dir}: epoch tables disagree in shape {sorted(shapes)}")
    return np.stack(stacks)


def export_mean_cia(series: np.ndarray, path: str | Path) -> None:
    write_json({"mean_cia": [float(x) for x in series]}, path)


def import_mean_cia(path: str | Path) -> np.ndarray:
    return np.asarray(read_json(path)["mean_cia"], dtype=float)


def export_mean_cia_csv(series: np.ndarray, path: str | Path) -> None:
    _write_csv(Path(path), ("epoch", "mean_cia"), ([str(t), fmt(v)] for t, v in enumerate(series, start=1)))


def export_gain(gains: np.ndarray, epoch: int, path: str | Path) -> None:
    write_json({"epoch": epoch, "gain": [float(g) for g in gains]}, path)


def import_gain(path: str | Path) -> tuple[np.ndarray, int]:
    doc = read_json(path)
    return np.asarray(doc["gain"], dtype=float), int(doc["epoch"])


def export_quality(report: QualityReport, path: str | Path) -> None:
    """Scatter data: one row per node with its counters and gain."""
    rows = (
        [str(r["node"]), str(r["q_in"]), str(r["q_out"]), fmt(r["gain"]), "1" if r["gained"] else "0"]
        for r in report.rows()
    )
    _write_csv(Path(path), QUALITY_HEADER, rows)


def export_quality_json(report: QualityReport, path: str | Path) -> None:
    write_json({"nodes": report.rows()}, path)


def import_quality_json(path: str | Path) -> QualityReport:
    nodes = read_json(path)["nodes"]
    return QualityReport(
        q_in=np.array([r["q_in"] for r in nodes], dtype=np.int64),
        q_out=np.array([r["q_out"] for r in nodes], dtype=np.int64),
        gains=np.array([r["gain"] for r in nodes], dtype=float),
    )
