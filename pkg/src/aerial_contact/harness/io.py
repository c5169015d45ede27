"""CSV and summary emission."""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path

from ..kinematics import WorkspaceCloud
from ..statics import StaticEquilibrium
from .simulation import TRACE_COLUMNS, ScenarioSummary, SimulationTrace, TraceRow

_TEXT_COLUMNS = ("mode", "flags")


def fmt(value: float) -> str:
    return f"{value:.9g}"


def _open(path, mode="w"):
    path = Path(path)
    try:
        return path.open(mode, newline="")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot open {path}: {exc.strerror}") from None


def write_trace(trace: SimulationTrace, path) -> None:
    with _open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for row in trace.rows:
            writer.writerow(
                [v if name in _TEXT_COLUMNS else fmt(v) for name, v in zip(TRACE_COLUMNS, row)]
            )


def read_trace(path) -> SimulationTrace:
    with _open(path, "r") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != TRACE_COLUMNS:
            raise ValueError(f"{path}: unexpected trace header {header}")
        rows = [
            TraceRow(*(v if name in _TEXT_COLUMNS else float(v) for name, v in zip(header, line)))
            for line in reader
        ]
    return SimulationTrace(rows)


def write_summary(summary: ScenarioSummary, path) -> None:
    with _open(path) as fh:
        for key, value in dataclasses.asdict(summary).items():
            if isinstance(value, float):
                value = fmt(value)
            fh.write(f"{key} = {value}\n")


SWEEP_COLUMNS = ("F_H", "theta", "T1", "T2", "T_total", "feasible")


def write_sweep(table: list[StaticEquilibrium], path) -> None:
    with _open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for eq in table:
            writer.writerow(
                [fmt(eq.F_H), fmt(eq.theta), fmt(eq.T1), fmt(eq.T2), fmt(eq.T_total), int(eq.feasible)]
            )


WORKSPACE_COLUMNS = ("x", "y", "z", "reachable", "application")


def write_workspace(cloud: WorkspaceCloud, path) -> None:
    with _open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(WORKSPACE_COLUMNS)
        for p, r, a in zip(cloud.points, cloud.reachable, cloud.application):
            writer.writerow([fmt(p[0]), fmt(p[1]), fmt(p[2]), int(r), int(a)])
