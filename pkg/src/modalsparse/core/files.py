"""Atomic text writes and the one float format every artifact uses.

Determinism is a property of the files, not only of the numbers: rows are
written in a fixed order and every float goes through ``fmt`` (17 significant
digits), so two runs on the same inputs produce byte-identical CSVs.
"""

from __future__ import annotations

import csv
import io
import os
from collections.abc import Iterable, Iterator, Sequence
from contextlib import contextmanager
from pathlib import Path
from tempfile import NamedTemporaryFile
from typing import TextIO

from pydantic import BaseModel

from modalsparse.config import FLOAT_FORMAT


def fmt(value: float) -> str:
    """Lossless decimal text for a float64."""
    return format(float(value), FLOAT_FORMAT)


@contextmanager
def atomic_write(path: Path) -> Iterator[TextIO]:
    """Open a temp file for writing and rename it over ``path`` on success.

    A concurrent reader sees the old or the new file, never a half-written
    one. On failure the temp file is removed and nothing changes.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    with NamedTemporaryFile(
        "w",
        encoding="utf-8",
        newline="",
        dir=path.parent,
        prefix=f"{path.name}.",
        suffix=".tmp",
        delete=False,
    ) as f:
        try:
            yield f
        except BaseException:
            os.unlink(f.name)
            raise
    os.replace(f.name, path)


def csv_text(
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    comments: Sequence[str] = (),
) -> str:
    """Render a CSV (``\\n`` line endings); floats must already be ``fmt``-ed."""
    buffer = io.StringIO()
    for comment in comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_text(path: Path, text: str) -> Path:
    with atomic_write(path) as f:
        f.write(text)
    return path


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    comments: Sequence[str] = (),
) -> Path:
    return write_text(path, csv_text(header, rows, comments))


def write_model(path: Path, model: BaseModel) -> Path:
    """A pydantic contract as indented JSON."""
    return write_text(path, model.model_dump_json(indent=2) + "\n")
