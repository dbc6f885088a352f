"""Stability diagram types, consistency marking, mode extraction, pole counts.

A diagram holds one row per solved model order. Each row keeps every
retained pole (for the stable/unstable counts) and, separately, the stable
in-band poles that are plotted. A plotted pole is *consistent* when a
plotted pole of some strictly lower order lies within ``threshold_rel`` of
it in frequency (the '+' of the classic diagram); the rest are '×'.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from modalsparse.contracts import ValidationError
from modalsparse.lscf.roots import Pole
from modalsparse.lscf.sparse import SparsityEstimate


class Method(str, enum.Enum):
    conventional = "conventional"
    omp = "omp"


@dataclass(frozen=True)
class DiagramEntry:
    pole: Pole
    consistent: bool = False


@dataclass(frozen=True)
class OrderRow:
    """One solved order.

    ``entries`` are the plotted poles sorted by frequency; ``all_poles`` is
    every nonzero root after degenerate collapse, stable or not, any band.
    For a real polynomial only one member of each conjugate pair is kept.
    """

    order: int
    entries: tuple[DiagramEntry, ...]
    all_poles: tuple[Pole, ...]
    zero_roots: int = 0
    removed_degenerate: int = 0
    support_size: int = 0
    residual: float = 0.0


@dataclass(frozen=True)
class StabilityDiagram:
    method: Method
    n_p: int
    threshold_rel: float
    band: tuple[float, float]
    rows: tuple[OrderRow, ...] = ()
    skipped: tuple[int, ...] = ()
    sparsity: SparsityEstimate | None = None

    def __post_init__(self) -> None:
        if not self.threshold_rel > 0:
            raise ValidationError("threshold_rel must be > 0", threshold_rel=self.threshold_rel)
        orders = [row.order for row in self.rows]
        if len(set(orders)) != len(orders):
            raise ValidationError("diagram rows must have distinct orders")

    @property
    def entries(self) -> dict[int, tuple[DiagramEntry, ...]]:
        return {row.order: row.entries for row in self.rows}

    def iter_entries(self):
        """(order, entry) pairs in row order."""
        for row in self.rows:
            for entry in row.entries:
                yield row.order, entry


@dataclass(frozen=True)
class PoleStats:
    n_stable: int
    n_unstable: int

    @property
    def total(self) -> int:
        return self.n_stable + self.n_unstable


@dataclass(frozen=True)
class ExtractedMode:
    """A cluster representative: the pole and where it came from."""

    f_hz: float
    zeta: float
    z: complex
    order: int
    n_orders: int


def _within(freqs: np.ndarray, lower: np.ndarray, threshold_rel: float) -> np.ndarray:
    """For each of ``freqs``: is some ``lower`` f_j within threshold_rel · f_j?"""
    if lower.size == 0 or freqs.size == 0:
        return np.zeros(freqs.size, dtype=bool)
    gaps = np.abs(freqs[:, np.newaxis] - lower[np.newaxis, :]) / lower[np.newaxis, :]
    return (gaps <= threshold_rel).any(axis=1)


def mark_consistency(diagram: StabilityDiagram) -> StabilityDiagram:
    """Recompute every consistency flag from scratch; idempotent."""
    lower = np.zeros(0)
    marked: list[OrderRow] = []
    for row in sorted(diagram.rows, key=lambda row: row.order):
        freqs = np.array([entry.pole.f_hz for entry in row.entries], dtype=float)
        flags = _within(freqs, lower, diagram.threshold_rel)
        entries = tuple(
            replace(entry, consistent=bool(flag)) for entry, flag in zip(row.entries, flags)
        )
        marked.append(replace(row, entries=entries))
        lower = np.concatenate([lower, freqs])
    return replace(diagram, rows=tuple(marked))


def extract_modes(diagram: StabilityDiagram, min_streak: int) -> list[ExtractedMode]:
    """Single-linkage clusters of consistent poles, by frequency.

    Neighbours (sorted by f) closer than ``threshold_rel`` share a cluster.
    A cluster spanning >= ``min_streak`` distinct orders is a mode; its
    representative is the highest-order member nearest the cluster median.
    """
    if min_streak < 1:
        raise ValidationError("min_streak must be >= 1", min_streak=min_streak)
    points = sorted(
        ((order, entry.pole) for order, entry in diagram.iter_entries() if entry.consistent),
        key=lambda item: (item[1].f_hz, item[0]),
    )
    if not points:
        return []

    clusters: list[list[tuple[int, Pole]]] = [[points[0]]]
    for order, pole in points[1:]:
        previous = clusters[-1][-1][1].f_hz
        if (pole.f_hz - previous) / previous <= diagram.threshold_rel:
            clusters[-1].append((order, pole))
        else:
            clusters.append([(order, pole)])

    modes: list[ExtractedMode] = []
    for cluster in clusters:
        orders = {order for order, _ in cluster}
        if len(orders) < min_streak:
            continue
        median = float(np.median([pole.f_hz for _, pole in cluster]))
        top = max(orders)
        _, best = min(
            ((order, pole) for order, pole in cluster if order == top),
            key=lambda item: abs(item[1].f_hz - median),
        )
        modes.append(
            ExtractedMode(f_hz=best.f_hz, zeta=best.zeta, z=best.z, order=top, n_orders=len(orders))
        )
    return sorted(modes, key=lambda mode: mode.f_hz)


def pole_stats(diagram: StabilityDiagram) -> PoleStats:
    """Stable and unstable counts over every retained pole of every order."""
    stable = sum(pole.stable for row in diagram.rows for pole in row.all_poles)
    total = sum(len(row.all_poles) for row in diagram.rows)
    return PoleStats(n_stable=int(stable), n_unstable=int(total - stable))


def spurious_count(diagram: StabilityDiagram) -> int:
    """Plotted poles without a lower-order witness."""
    return sum(not entry.consistent for _, entry in diagram.iter_entries())
