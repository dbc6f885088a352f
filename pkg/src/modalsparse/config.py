"""Centralized project configuration.

Single source of truth for the numeric defaults every stage shares and for
the two environment knobs. The CLI resolves a run's settings as
flags > config file > these defaults; nothing below the CLI reads a config
file, so library callers always see plain keyword arguments.
"""

import os
from pathlib import Path


def _env_path(name: str, default: Path) -> Path:
    """Return ``$name`` as an expanded Path, falling back to *default*."""
    value = os.environ.get(name)
    return Path(value).expanduser() if value else default


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name, "").strip()
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def _find_project_root() -> Path:
    """Find project root by walking up from this file to find pyproject.toml."""
    current = Path(__file__).resolve().parent
    while current != current.parent:
        if (current / "pyproject.toml").exists():
            return current
        current = current.parent
    return Path(__file__).resolve().parent.parent.parent


# ── Project root ──────────────────────────────────────────────────
PROJECT_ROOT = _find_project_root()
# Generated JSON Schemas (python -m modalsparse.contracts.make_schema).
CONTRACTS_DIR = PROJECT_ROOT / "contracts"

# ── Environment ───────────────────────────────────────────────────
THREADS_ENV = "MODALSPARSE_THREADS"
OUT_DIR_ENV = "MODALSPARSE_OUT_DIR"


def default_out_dir() -> Path:
    return _env_path(OUT_DIR_ENV, Path("modalsparse-out"))


def worker_count() -> int:
    """Worker cap from ``$MODALSPARSE_THREADS``; 1 (sequential) when unset.

    Read at call time, not import time, so a caller can change it per run.
    """
    return max(1, _env_int(THREADS_ENV, 1))


# ── Stabilization defaults ────────────────────────────────────────
# Relative frequency window for calling a pole consistent with a lower order.
DEFAULT_THRESHOLD_REL = 0.01
# LASSO penalty as a fraction of lambda_max = max_i |<phi_i, d>|. Scale-free:
# small enough to keep the physical poles' coefficients, large enough to zero
# the ones that only fit noise.
DEFAULT_LAMBDA_RATIO = 0.01
# Distinct orders a frequency cluster must span to be reported as a mode.
DEFAULT_MIN_STREAK = 3
DEFAULT_ORDER = 30
DEFAULT_SEED = 0
# z-plane coincidence tolerance for collapsing degenerate roots.
DEFAULT_DEDUP_TOL = 1e-6

# ── Synthesis defaults (the numerical study band) ─────────────────
DEFAULT_F_MIN_HZ = 10.0
DEFAULT_F_MAX_HZ = 3000.0
DEFAULT_LINES = 1024

# ── Random-polynomial study defaults ──────────────────────────────
DEFAULT_STUDY_DEGREE = 100
DEFAULT_STUDY_COUNTS = (100, 70, 30, 5)
DEFAULT_STUDY_TRIALS = 1000
# Coefficients are drawn with Re, Im ~ Uniform(-s, s). s = 0.18 puts the dense
# degree-100 case at about 68% of roots inside; at s = 1 it is about 50%.
DEFAULT_STUDY_COEFF_SCALE = 0.18

# ── Numeric text ──────────────────────────────────────────────────
# 17 significant digits round-trips every float64 exactly.
FLOAT_FORMAT = ".17g"


def _load_env_file(path: Path) -> dict[str, str]:
    """Load key=value pairs from an env-style file."""
    config: dict[str, str] = {}
    try:
        for line in path.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line and not line.startswith("#") and "=" in line:
                key, _, value = line.partition("=")
                config[key.strip()] = value.strip()
    except FileNotFoundError:
        pass
    return config


def load_config_file(path: Path) -> dict[str, str]:
    """The ``--config`` file as a dict, keys normalized to underscores.

    Unlike the optional env files, a config file the user named must exist.
    """
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    return {
        key.replace("-", "_"): value
        for key, value in _load_env_file(path).items()
    }
