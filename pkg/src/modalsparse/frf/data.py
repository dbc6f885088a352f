"""The FRF-side domain types and the sampling-period rule.

Every array is validated once, at construction; downstream code trusts the
shapes. The types are frozen and hold numpy arrays; treat the arrays as
read-only, and build a new object (``dataclasses.replace``) to change one.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from modalsparse.contracts import UnsupportedModelError, ValidationError


def sampling_period(grid_freqs: Sequence[float] | np.ndarray) -> float:
    """T_s = 1 / (2 f_max).

    Maps the analysis band onto the upper half of the unit circle: Omega =
    exp(-j w T_s) sweeps arg in (0, pi] as f runs up to f_max.
    """
    freqs = np.asarray(grid_freqs, dtype=float)
    if freqs.size == 0:
        raise ValidationError("cannot derive a sampling period from an empty grid")
    f_max = float(freqs.max())
    if f_max <= 0:
        raise ValidationError("highest frequency must be positive", f_max=f_max)
    return 1.0 / (2.0 * f_max)


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    freqs_hz: np.ndarray
    ts_seconds: float

    def __post_init__(self) -> None:
        freqs = np.array(self.freqs_hz, dtype=float)
        if freqs.ndim != 1 or freqs.size == 0:
            raise ValidationError("frequency grid must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(freqs)) or np.any(freqs <= 0):
            raise ValidationError("frequencies must be finite and > 0")
        steps = np.diff(freqs)
        if np.any(steps <= 0):
            line = int(np.argmax(steps <= 0)) + 1
            raise ValidationError("frequencies must be strictly increasing", line=line)
        if not (np.isfinite(self.ts_seconds) and self.ts_seconds > 0):
            raise ValidationError("sampling period must be > 0", ts_seconds=self.ts_seconds)
        freqs.setflags(write=False)
        object.__setattr__(self, "freqs_hz", freqs)
        object.__setattr__(self, "ts_seconds", float(self.ts_seconds))

    @classmethod
    def from_freqs(cls, freqs_hz, ts_seconds: float | None = None) -> "FrequencyGrid":
        """A grid whose T_s comes from the band when not given."""
        if ts_seconds is None:
            ts_seconds = sampling_period(freqs_hz)
        return cls(np.asarray(freqs_hz, dtype=float), ts_seconds)

    def __len__(self) -> int:
        return len(self.freqs_hz)

    @property
    def omega(self) -> np.ndarray:
        """Angular frequencies in rad/s."""
        return 2.0 * np.pi * self.freqs_hz

    @property
    def band(self) -> tuple[float, float]:
        return float(self.freqs_hz[0]), float(self.freqs_hz[-1])

    def same_as(self, other: "FrequencyGrid") -> bool:
        return self.ts_seconds == other.ts_seconds and np.array_equal(self.freqs_hz, other.freqs_hz)


def frequency_grid(f_min: float, f_max: float, n_lines: int) -> FrequencyGrid:
    """Evenly spaced lines from f_min to f_max inclusive, T_s from the band."""
    if n_lines < 2:
        raise ValidationError("a grid needs at least two lines", n_lines=n_lines)
    if not 0 < f_min < f_max:
        raise ValidationError("need 0 < f_min < f_max", f_min=f_min, f_max=f_max)
    return FrequencyGrid.from_freqs(np.linspace(f_min, f_max, n_lines))


@dataclass(frozen=True, eq=False)
class FrfSet:
    """Single-input FRFs, one row per output: ``h`` is n_o × n_f complex.

    ``weights`` is None (all ones) or n_o × n_f, entries >= 0. A single weight
    row (a 1-D array or shape (1, n_f)) is broadcast to every output here,
    so consumers only ever see the full shape.
    """

    grid: FrequencyGrid
    h: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self) -> None:
        h = np.array(self.h, dtype=complex)
        if h.ndim == 1:
            h = h[np.newaxis, :]
        if h.ndim != 2 or h.shape[1] != len(self.grid):
            raise ValidationError(
                "FRF matrix must be outputs × frequency lines",
                shape=str(h.shape),
                n_f=len(self.grid),
            )
        if h.shape[0] == 0:
            raise ValidationError("FRF set needs at least one output")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        if self.weights is not None:
            w = np.array(self.weights, dtype=float)
            if w.ndim == 1:
                w = w[np.newaxis, :]
            if w.shape[0] == 1 and h.shape[0] > 1:
                w = np.repeat(w, h.shape[0], axis=0)
            if w.shape != h.shape:
                raise ValidationError(
                    "weights must match the FRF shape", weights=str(w.shape), h=str(h.shape)
                )
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise ValidationError("weights must be finite and >= 0")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)

    @property
    def n_outputs(self) -> int:
        return self.h.shape[0]

    @property
    def n_lines(self) -> int:
        return self.h.shape[1]

    def weight_matrix(self) -> np.ndarray:
        """Weights with the default of 1 filled in."""
        return self.weights if self.weights is not None else np.ones(self.h.shape)

    def mean_magnitude(self) -> np.ndarray:
        """|H| averaged over outputs, per line; the diagram's backdrop curve."""
        return np.abs(self.h).mean(axis=0)


@dataclass(frozen=True, eq=False)
class Mode:
    f_hz: float
    zeta: float
    residues: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self) -> None:
        if not (np.isfinite(self.f_hz) and self.f_hz > 0):
            raise ValidationError("natural frequency must be > 0", f_hz=self.f_hz)
        residues = np.array(self.residues, dtype=complex).reshape(-1)
        residues.setflags(write=False)
        object.__setattr__(self, "residues", residues)
        object.__setattr__(self, "f_hz", float(self.f_hz))
        object.__setattr__(self, "zeta", float(self.zeta))

    @property
    def pole(self) -> complex:
        """lambda = -zeta w + j w sqrt(1 - zeta^2); underdamped modes only."""
        if not 0 < self.zeta < 1:
            if self.zeta >= 1:
                raise UnsupportedModelError(
                    "overdamped mode (zeta >= 1) has no oscillatory pole pair",
                    f_hz=self.f_hz,
                    zeta=self.zeta,
                )
            raise ValidationError("damping ratio must be > 0", f_hz=self.f_hz, zeta=self.zeta)
        omega = 2.0 * np.pi * self.f_hz
        return complex(-self.zeta * omega, omega * np.sqrt(1.0 - self.zeta**2))


@dataclass(frozen=True, eq=False)
class ModalModel:
    modes: tuple[Mode, ...] = ()

    def __post_init__(self) -> None:
        modes = tuple(self.modes)
        counts = {len(mode.residues) for mode in modes}
        if len(counts) > 1:
            raise ValidationError("modes disagree on the number of outputs", counts=str(sorted(counts)))
        object.__setattr__(self, "modes", modes)

    def __len__(self) -> int:
        return len(self.modes)

    @property
    def n_outputs(self) -> int | None:
        """Residue length, or None for an empty model."""
        return len(self.modes[0].residues) if self.modes else None

    def residue_matrix(self) -> np.ndarray:
        """n_o × m; column r is mode r's shape."""
        if not self.modes:
            return np.zeros((0, 0), dtype=complex)
        return np.column_stack([mode.residues for mode in self.modes])

    def sorted(self) -> "ModalModel":
        return ModalModel(tuple(sorted(self.modes, key=lambda mode: mode.f_hz)))
