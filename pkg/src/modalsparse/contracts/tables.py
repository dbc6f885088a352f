"""Column layouts of every CSV modalsparse reads or writes.

One definition per file family, shared by the writer (report/) and the FRF
reader (frf/io.py). A column renamed here is renamed for every reader at once;
a column renamed at a call site would silently break the other side.
"""

from __future__ import annotations

# ── FRF CSV ───────────────────────────────────────────────────────
# Optional metadata line before the header: ``# ts_seconds=<value>``.
# Header: freq_hz,out1_re,out1_im[,out1_w],out2_re,... (k = 1..n_o).
FRF_FREQ_COLUMN = "freq_hz"
TS_METADATA_KEY = "ts_seconds"


def frf_columns(output: int, weighted: bool) -> list[str]:
    """The columns for 1-based ``output``."""
    names = [f"out{output}_re", f"out{output}_im"]
    if weighted:
        names.append(f"out{output}_w")
    return names


# ── Stabilization outputs ─────────────────────────────────────────
DIAGRAM_COLUMNS = ("order", "f_hz", "zeta", "abs_z", "consistent")
STATS_COLUMNS = ("method", "n_stable", "n_unstable")
POLE_PLANE_COLUMNS = ("order", "z_re", "z_im", "abs_z", "f_hz", "zeta", "stable")
# Per-order diagnostics of one sweep.
ORDER_COLUMNS = ("order", "support_size", "residual", "n_poles", "n_plotted", "zero_roots")

# ── Mode comparison ───────────────────────────────────────────────
COMPARISON_COLUMNS = (
    "mode",
    "f_a_hz",
    "f_b_hz",
    "f_error_pct",
    "zeta_a",
    "zeta_b",
    "zeta_error_pct",
    "mac",
    "matched",
)

# ── Random-polynomial study ───────────────────────────────────────
STUDY_COLUMNS = ("nonzero", "mean_pct_inside", "std_pct_inside")
ROOT_CLOUD_COLUMNS = ("nonzero", "trial", "re", "im", "abs")

# ── MAC matrix ────────────────────────────────────────────────────
# Rows are modes of the first model (a1..), columns modes of the second (b1..).
MAC_ROW_COLUMN = "mode"


def mac_columns(n_b: int) -> list[str]:
    return [MAC_ROW_COLUMN, *(f"b{j}" for j in range(1, n_b + 1))]
