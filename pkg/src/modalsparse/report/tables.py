"""CSV artifacts. Column layouts live in ``contracts.tables``."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import numpy as np

from modalsparse.contracts.tables import (
    COMPARISON_COLUMNS,
    DIAGRAM_COLUMNS,
    ORDER_COLUMNS,
    POLE_PLANE_COLUMNS,
    ROOT_CLOUD_COLUMNS,
    STATS_COLUMNS,
    STUDY_COLUMNS,
    mac_columns,
)
from modalsparse.core.files import fmt, write_csv
from modalsparse.experiments.sparsity_study import SparsityStudyResult, TrialRoots
from modalsparse.modal.post import MacMatrix, ModePairing
from modalsparse.stabilization.diagram import PoleStats, StabilityDiagram


def _opt(value: float | None) -> str:
    return "" if value is None else fmt(value)


def _diagram_comments(diagram: StabilityDiagram) -> list[str]:
    comments = [f"method={diagram.method.value}", f"threshold_rel={fmt(diagram.threshold_rel)}"]
    if diagram.sparsity is not None:
        comments.append(f"k={diagram.sparsity.k}")
    if diagram.skipped:
        comments.append("skipped_orders=" + " ".join(str(order) for order in diagram.skipped))
    return comments


def write_diagram_csv(path: Path, diagram: StabilityDiagram) -> Path:
    rows = [
        (order, fmt(entry.pole.f_hz), fmt(entry.pole.zeta), fmt(abs(entry.pole.z)), int(entry.consistent))
        for order, entry in diagram.iter_entries()
    ]
    return write_csv(path, DIAGRAM_COLUMNS, rows, _diagram_comments(diagram))


def write_orders_csv(path: Path, diagram: StabilityDiagram) -> Path:
    rows = [
        (
            row.order,
            row.support_size,
            fmt(row.residual),
            len(row.all_poles),
            len(row.entries),
            row.zero_roots,
        )
        for row in diagram.rows
    ]
    return write_csv(path, ORDER_COLUMNS, rows, _diagram_comments(diagram))


def write_pole_plane_csv(path: Path, diagram: StabilityDiagram) -> Path:
    """Every retained pole, stable or not, in any band."""
    rows = [
        (
            row.order,
            fmt(pole.z.real),
            fmt(pole.z.imag),
            fmt(abs(pole.z)),
            fmt(pole.f_hz),
            fmt(pole.zeta),
            int(pole.stable),
        )
        for row in diagram.rows
        for pole in row.all_poles
    ]
    return write_csv(path, POLE_PLANE_COLUMNS, rows, _diagram_comments(diagram))


def write_stats_csv(path: Path, stats: Sequence[tuple[str, PoleStats]]) -> Path:
    rows = [(method, s.n_stable, s.n_unstable) for method, s in stats]
    return write_csv(path, STATS_COLUMNS, rows)


def write_comparison_csv(path: Path, pairings: Sequence[ModePairing]) -> Path:
    rows = []
    for number, pair in enumerate(pairings, start=1):
        rows.append(
            (
                number,
                _opt(pair.f_a_hz),
                _opt(pair.f_b_hz),
                _opt(pair.f_error_pct),
                _opt(pair.zeta_a),
                _opt(pair.zeta_b),
                _opt(pair.zeta_error_pct),
                _opt(pair.mac),
                int(pair.matched),
            )
        )
    return write_csv(path, COMPARISON_COLUMNS, rows)


def write_mac_csv(path: Path, matrix: MacMatrix) -> Path:
    n_a, n_b = matrix.values.shape
    rows = [
        (f"a{i + 1}", *(fmt(value) for value in matrix.values[i])) for i in range(n_a)
    ]
    return write_csv(path, mac_columns(n_b), rows)


def write_study_csv(path: Path, results: Sequence[SparsityStudyResult], degree: int) -> Path:
    rows = [
        (r.nonzero_count, fmt(r.pct_inside_mean), fmt(r.pct_inside_std)) for r in results
    ]
    trials = results[0].trials if results else 0
    return write_csv(path, STUDY_COLUMNS, rows, [f"degree={degree}", f"trials={trials}"])


def write_root_cloud_csv(path: Path, cloud: Sequence[TrialRoots]) -> Path:
    rows = [
        (item.nonzero, item.trial, fmt(z.real), fmt(z.imag), fmt(abs(z)))
        for item in cloud
        for z in np.asarray(item.roots)
    ]
    return write_csv(path, ROOT_CLOUD_COLUMNS, rows)
