"""FRF and modal-model files.

Two FRF layouts, picked by ``fmt`` or the file suffix:

* CSV: optional ``# ts_seconds=<value>`` line, then the header
  ``freq_hz,out1_re,out1_im[,out1_w],out2_re,...`` and one row per line.
  Weight columns are all-or-nothing across outputs.
* JSON: ``contracts.FrfFile``.

When the file carries no sampling period it is derived from the band
(``sampling_period``). Floats go out with 17 significant digits, so
``load_frf(save_frf(x))`` returns the same values bit for bit.
"""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Literal

import numpy as np
import pydantic

from modalsparse.contracts import (
    FrfChannel,
    FrfFile,
    ModalModelFile,
    ModeRecord,
    ParseError,
    ValidationError,
)
from modalsparse.contracts.tables import FRF_FREQ_COLUMN, TS_METADATA_KEY, frf_columns
from modalsparse.core.files import csv_text, fmt, write_model, write_text
from modalsparse.frf.data import FrequencyGrid, FrfSet, ModalModel, Mode

log = logging.getLogger(__name__)

FrfFormat = Literal["csv", "json"]


def _resolve_format(path: Path, fmt_name: str | None) -> FrfFormat:
    name = (fmt_name or path.suffix.lstrip(".")).lower()
    if name not in ("csv", "json"):
        raise ValidationError(f"unknown FRF format {name!r}; expected csv or json", path=str(path))
    return name  # type: ignore[return-value]


def _first_pydantic_error(exc: pydantic.ValidationError) -> tuple[str, str]:
    """(field path, message) of the first failure, for a one-line report."""
    first = exc.errors()[0]
    where = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
    return where, first.get("msg", "invalid value")


def _read_text(path: Path) -> str:
    """The whole file as UTF-8; an undecodable byte is a ParseError naming its line."""
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data.count(b"\n", 0, exc.start) + 1
        raise ParseError(
            f"not UTF-8 text: {exc.reason} at byte {exc.start}", line=line, path=str(path)
        ) from None


def _one_line(exc: Exception) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


# ── CSV ───────────────────────────────────────────────────────────


def _parse_header(header: list[str], line: int) -> tuple[int, bool]:
    """(n_outputs, weighted) from a header row, or ParseError."""
    if not header or header[0].strip() != FRF_FREQ_COLUMN:
        raise ParseError(f"first column must be {FRF_FREQ_COLUMN!r}", line=line, field="header")
    names = [name.strip() for name in header[1:]]
    for weighted, width in ((False, 2), (True, 3)):
        if not names or len(names) % width:
            continue
        n_outputs = len(names) // width
        expected = [col for k in range(1, n_outputs + 1) for col in frf_columns(k, weighted)]
        if names == expected:
            return n_outputs, weighted
    raise ParseError(
        "header must be freq_hz followed by out<k>_re,out<k>_im[,out<k>_w] for k = 1..n",
        line=line,
        field="header",
    )


def _load_csv(path: Path) -> FrfSet:
    ts_seconds: float | None = None
    header: list[str] | None = None
    header_line = 0
    rows: list[list[float]] = []
    with io.StringIO(_read_text(path), newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            first = row[0].strip()
            if first.startswith("#"):
                key, sep, value = first.lstrip("#").partition("=")
                if sep and key.strip() == TS_METADATA_KEY:
                    try:
                        ts_seconds = float(value)
                    except ValueError:
                        raise ParseError(
                            "sampling period is not a number", line=line_no, field=TS_METADATA_KEY
                        ) from None
                continue
            if header is None:
                header, header_line = row, line_no
                n_outputs, weighted = _parse_header(header, line_no)
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(row)}", line=line_no, field="row"
                )
            values = []
            for name, cell in zip(header, row):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"not a number: {cell!r}", line=line_no, field=name.strip()
                    ) from None
            rows.append(values)
    if header is None:
        raise ParseError("no header row", line=0, field="header")
    if not rows:
        raise ParseError("no frequency lines after the header", line=header_line, field="row")

    table = np.asarray(rows, dtype=float)
    width = 3 if weighted else 2
    body = table[:, 1:].reshape(len(rows), n_outputs, width)
    h = (body[:, :, 0] + 1j * body[:, :, 1]).T
    weights = body[:, :, 2].T if weighted else None
    grid = FrequencyGrid.from_freqs(table[:, 0], ts_seconds)
    return FrfSet(grid=grid, h=h, weights=weights)


def frf_csv_text(frf: FrfSet) -> str:
    weighted = frf.weights is not None
    header = [FRF_FREQ_COLUMN]
    for k in range(1, frf.n_outputs + 1):
        header.extend(frf_columns(k, weighted))
    rows = []
    for line, freq in enumerate(frf.grid.freqs_hz):
        row = [fmt(freq)]
        for o in range(frf.n_outputs):
            value = frf.h[o, line]
            row.extend((fmt(value.real), fmt(value.imag)))
            if frf.weights is not None:
                row.append(fmt(frf.weights[o, line]))
        rows.append(row)
    return csv_text(header, rows, comments=[f"{TS_METADATA_KEY}={fmt(frf.grid.ts_seconds)}"])


# ── JSON ──────────────────────────────────────────────────────────


def _load_json(path: Path) -> FrfSet:
    try:
        payload = FrfFile.model_validate_json(_read_text(path))
    except pydantic.ValidationError as exc:
        where, message = _first_pydantic_error(exc)
        raise ParseError(message, field=where, path=str(path)) from None
    grid = FrequencyGrid.from_freqs(payload.freq_hz, payload.ts_seconds)
    h = np.array([np.asarray(ch.re) + 1j * np.asarray(ch.im) for ch in payload.outputs])
    has_weights = [ch.w is not None for ch in payload.outputs]
    if any(has_weights) and not all(has_weights):
        raise ParseError("weights must be given for every output or none", field="outputs.w")
    weights = np.array([ch.w for ch in payload.outputs], dtype=float) if all(has_weights) else None
    return FrfSet(grid=grid, h=h, weights=weights)


def frf_file(frf: FrfSet) -> FrfFile:
    outputs = []
    for o in range(frf.n_outputs):
        row = frf.h[o]
        outputs.append(
            FrfChannel(
                re=row.real.tolist(),
                im=row.imag.tolist(),
                w=None if frf.weights is None else frf.weights[o].tolist(),
            )
        )
    return FrfFile(ts_seconds=frf.grid.ts_seconds, freq_hz=frf.grid.freqs_hz.tolist(), outputs=outputs)


# ── Public API ────────────────────────────────────────────────────


def load_frf(path: Path, fmt_name: str | None = None) -> FrfSet:
    """Read an FRF set; format from ``fmt_name`` or the suffix."""
    path = Path(path)
    kind = _resolve_format(path, fmt_name)
    try:
        frf = _load_csv(path) if kind == "csv" else _load_json(path)
    except ParseError as exc:
        exc.context.setdefault("path", str(path))
        raise
    except ValueError as exc:
        # Content that parses but cannot form an FRF set (ragged arrays, bad grid).
        raise ParseError(f"malformed FRF file: {_one_line(exc)}", path=str(path)) from None
    log.debug(
        "loaded %s: %d outputs × %d lines, T_s=%g", path, frf.n_outputs, frf.n_lines, frf.grid.ts_seconds
    )
    return frf


def save_frf(frf: FrfSet, path: Path, fmt_name: str | None = None) -> Path:
    path = Path(path)
    if _resolve_format(path, fmt_name) == "csv":
        return write_text(path, frf_csv_text(frf))
    return write_model(path, frf_file(frf))


def modal_model_from_file(payload: ModalModelFile) -> ModalModel:
    modes = tuple(
        Mode(
            f_hz=record.f_hz,
            zeta=record.zeta,
            residues=np.array([complex(re, im) for re, im in record.residues], dtype=complex),
        )
        for record in payload.modes
    )
    return ModalModel(modes)


def modal_model_file(model: ModalModel, **provenance: object) -> ModalModelFile:
    """The wire form; ``provenance`` keys (method, order) ride along as extras."""
    records = [
        ModeRecord(
            f_hz=mode.f_hz,
            zeta=mode.zeta,
            residues=[(float(r.real), float(r.imag)) for r in mode.residues],
        )
        for mode in model.modes
    ]
    return ModalModelFile(modes=records, **provenance)


def load_modal_model(path: Path) -> ModalModel:
    path = Path(path)
    try:
        payload = ModalModelFile.model_validate_json(_read_text(path))
    except pydantic.ValidationError as exc:
        where, message = _first_pydantic_error(exc)
        raise ParseError(message, field=where, path=str(path)) from None
    try:
        return modal_model_from_file(payload)
    except ValueError as exc:
        raise ParseError(f"malformed modal model: {_one_line(exc)}", path=str(path)) from None


def save_modal_model(model: ModalModel, path: Path, **provenance: object) -> Path:
    return write_model(Path(path), modal_model_file(model, **provenance))
