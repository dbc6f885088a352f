"""The one shape a long-running sweep reports progress in.

``(done, total, message)``: units finished, units expected, and the wording;
the worker owns the wording because only it knows what a unit is. ``done == 0``
marks a phase start and ``done == total`` its end. ``total == 0`` means
"nothing to do" and is not an error.
"""

from __future__ import annotations

from collections.abc import Callable

ProgressFn = Callable[[int, int, str], None]


def no_progress(done: int, total: int, message: str) -> None:
    """The default sink."""
