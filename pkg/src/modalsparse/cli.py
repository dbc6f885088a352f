"""``modalsparse`` command line: synth, fit, compare, roots-study.

Settings resolve as flags > ``--config`` file > ``modalsparse.config``
defaults, and are validated once as a ``RunConfig``. Every artifact goes
into ``--out-dir`` (default ``$MODALSPARSE_OUT_DIR`` or ./modalsparse-out).

Exit codes: 0 when every requested artifact was written, 1 on a library or
I/O failure (one ``error[CODE]: ...`` line on stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Literal

import pydantic
from pydantic import BaseModel, Field
from tqdm import tqdm

from modalsparse import config
from modalsparse.contracts import (
    ErrorCode,
    ErrorPayload,
    FitReport,
    MethodReport,
    ModalSparseError,
    ParseError,
)
from modalsparse.core.files import write_model
from modalsparse.experiments.sparsity_study import run_sparsity_study, sparsity_root_cloud
from modalsparse.frf.data import FrfSet, ModalModel, frequency_grid
from modalsparse.frf.io import load_frf, load_modal_model, save_frf, save_modal_model
from modalsparse.frf.synthesis import inject_noise, synthesize_frf
from modalsparse.lscf.kernel import NormalCache, assemble_normal_cache
from modalsparse.modal.post import compare_modes, curve_fit_mse, estimate_mode_shapes, resynthesize
from modalsparse.report import svg, tables
from modalsparse.stabilization.diagram import (
    Method,
    PoleStats,
    StabilityDiagram,
    extract_modes,
    pole_stats,
    spurious_count,
)
from modalsparse.stabilization.sweep import run_conventional, run_omp

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class RunConfig(BaseModel):
    """One run's validated settings. Field names are the long flags."""

    model_config = {"extra": "forbid"}

    method: Literal["conventional", "omp", "both"] = "both"
    order: int = Field(default=config.DEFAULT_ORDER, ge=2, description="Maximum model order n_p")
    threshold: float = Field(default=config.DEFAULT_THRESHOLD_REL, gt=0)
    lambda_ratio: float = Field(default=config.DEFAULT_LAMBDA_RATIO, gt=0, lt=1)
    min_streak: int = Field(default=config.DEFAULT_MIN_STREAK, ge=1)
    seed: int = config.DEFAULT_SEED
    alpha: float = Field(default=0.0, ge=0)
    out_dir: Path = Field(default_factory=config.default_out_dir)

    @property
    def methods(self) -> list[Method]:
        if self.method == "both":
            return [Method.conventional, Method.omp]
        return [Method(self.method)]


class UsageError(Exception):
    """Bad flags or config values; reported with exit code 2."""


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge file values under the flags the user actually passed."""
    merged: dict[str, object] = {}
    if getattr(args, "config", None):
        try:
            merged.update(config.load_config_file(Path(args.config)))
        except UnicodeDecodeError as exc:
            line = exc.object.count(b"\n", 0, exc.start) + 1
            raise ParseError(
                f"config file is not UTF-8 text: {exc.reason}", line=line, path=str(args.config)
            ) from None
    for name in RunConfig.model_fields:
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    try:
        return RunConfig.model_validate(merged)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ())) or "config"
        raise UsageError(f"{where}: {first.get('msg', 'invalid value')}") from None


class _TqdmProgress:
    """``ProgressFn`` backed by a tqdm bar; silent when stderr is not a TTY."""

    def __init__(self, desc: str) -> None:
        self.desc = desc
        self.bar: tqdm | None = None

    def __call__(self, done: int, total: int, message: str) -> None:
        if self.bar is None:
            self.bar = tqdm(total=total, desc=self.desc, file=sys.stderr, disable=not sys.stderr.isatty())
        self.bar.n = done
        self.bar.set_postfix_str(message, refresh=True)

    def close(self) -> None:
        if self.bar is not None:
            self.bar.close()


# ── synth ─────────────────────────────────────────────────────────


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    model = load_modal_model(Path(args.model))
    grid = frequency_grid(args.f_min, args.f_max, args.lines)
    clean = synthesize_frf(model, grid)
    out = cfg.out_dir
    save_frf(clean, out / "frf_clean.csv")
    log.info("wrote %s (%d modes, %d lines)", out / "frf_clean.csv", len(model), len(grid))
    if cfg.alpha > 0:
        noisy = inject_noise(clean, cfg.alpha, cfg.seed)
        save_frf(noisy, out / "frf_noisy.csv")
        log.info("wrote %s (alpha=%g, seed=%d)", out / "frf_noisy.csv", cfg.alpha, cfg.seed)
    return EXIT_OK


# ── fit ───────────────────────────────────────────────────────────


def _sweep(frf: FrfSet, cfg: RunConfig, method: Method, cache: NormalCache) -> StabilityDiagram:
    if method is Method.conventional:
        return run_conventional(frf, cfg.order, cfg.threshold, cache=cache)
    return run_omp(frf, cfg.order, cfg.lambda_ratio, cfg.threshold, cache=cache)


def _fit_method(
    frf: FrfSet, cfg: RunConfig, method: Method, cache: NormalCache
) -> tuple[MethodReport, PoleStats]:
    diagram = _sweep(frf, cfg, method, cache)
    modes = extract_modes(diagram, cfg.min_streak)
    if modes:
        model = estimate_mode_shapes(frf, [(mode.f_hz, mode.zeta) for mode in modes])
    else:
        log.warning("%s: no mode spans %d orders", method.value, cfg.min_streak)
        model = ModalModel()
    fitted = resynthesize(model, frf.grid, frf.n_outputs)
    mse = curve_fit_mse(frf, fitted)

    out, name = cfg.out_dir, method.value
    tables.write_diagram_csv(out / f"diagram_{name}.csv", diagram)
    tables.write_orders_csv(out / f"orders_{name}.csv", diagram)
    tables.write_pole_plane_csv(out / f"poles_{name}.csv", diagram)
    svg.write_svg(out / f"diagram_{name}.svg", svg.stability_diagram_svg(diagram, frf))
    save_modal_model(model, out / f"modes_{name}.json", method=name, order=cfg.order)
    save_frf(fitted, out / f"resynth_{name}.csv")

    stats = pole_stats(diagram)
    for mode in modes:
        log.info("%s: mode at %.4f Hz, zeta=%.5f (%d orders)", name, mode.f_hz, mode.zeta, mode.n_orders)
    report = MethodReport(
        method=name,
        order=cfg.order,
        sparsity_k=diagram.sparsity.k if diagram.sparsity else None,
        lasso_lambda=diagram.sparsity.lasso_lambda if diagram.sparsity else None,
        n_modes=len(model),
        n_stable=stats.n_stable,
        n_unstable=stats.n_unstable,
        n_spurious=spurious_count(diagram),
        skipped_orders=list(diagram.skipped),
        mse=mse,
    )
    return report, stats


def cmd_fit(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    frf = load_frf(Path(args.frf), args.format)
    cache = assemble_normal_cache(frf, cfg.order)
    results = [_fit_method(frf, cfg, method, cache) for method in cfg.methods]
    reports = [report for report, _ in results]
    tables.write_stats_csv(cfg.out_dir / "stats.csv", [(r.method, stats) for r, stats in results])
    write_model(
        cfg.out_dir / "fit_report.json",
        FitReport(
            source=str(args.frf),
            threshold_rel=cfg.threshold,
            min_streak=cfg.min_streak,
            methods=reports,
        ),
    )
    for r in reports:
        log.info(
            "%s: %d modes, %d stable / %d unstable poles, %d spurious, MSE %.4g",
            r.method,
            r.n_modes,
            r.n_stable,
            r.n_unstable,
            r.n_spurious,
            r.mse,
        )
    return EXIT_OK


# ── compare ───────────────────────────────────────────────────────


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    model_a = load_modal_model(Path(args.modes_a))
    model_b = load_modal_model(Path(args.modes_b))
    pairings, mac_matrix = compare_modes(model_a, model_b)
    tables.write_comparison_csv(cfg.out_dir / "comparison.csv", pairings)
    if mac_matrix is None:
        log.warning("mode shapes are not comparable; skipping the MAC outputs")
    else:
        tables.write_mac_csv(cfg.out_dir / "mac.csv", mac_matrix)
        svg.write_svg(cfg.out_dir / "mac.svg", svg.mac_heatmap_svg(mac_matrix))
    matched = sum(pair.matched for pair in pairings)
    log.info("compared %d vs %d modes, %d matched", len(model_a), len(model_b), matched)
    return EXIT_OK


# ── roots-study ───────────────────────────────────────────────────


def _counts(text: str) -> list[int]:
    try:
        counts = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not counts:
        raise argparse.ArgumentTypeError("need at least one count")
    return counts


def cmd_roots_study(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if args.trials < 1:
        raise UsageError("trials must be >= 1")
    if any(not 1 <= count <= args.degree for count in args.counts):
        raise UsageError("every count must lie in [1, degree]")
    if not args.coeff_scale > 0:
        raise UsageError("coeff-scale must be > 0")
    progress = _TqdmProgress("roots-study")
    try:
        results = run_sparsity_study(
            args.degree, args.counts, args.trials, cfg.seed, progress=progress, scale=args.coeff_scale
        )
    finally:
        progress.close()
    tables.write_study_csv(cfg.out_dir / "sparsity_study.csv", results, args.degree)
    svg.write_svg(cfg.out_dir / "sparsity_study.svg", svg.study_errorbar_svg(results, args.degree))
    if args.roots_out:
        cloud = sparsity_root_cloud(args.degree, args.counts, args.trials, cfg.seed, scale=args.coeff_scale)
        tables.write_root_cloud_csv(Path(args.roots_out), cloud)
    return EXIT_OK


# ── parser ────────────────────────────────────────────────────────


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--out-dir", dest="out_dir", help="Output directory")
    p.add_argument("--seed", type=int, help=f"Random seed (default: {config.DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modalsparse",
        description="Modal parameters from FRFs with LSCF and OMP-sparsified LSCF",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="Synthesize FRFs from a modal model JSON")
    synth.add_argument("--model", required=True, help="modes.json with f_hz, zeta, residues")
    synth.add_argument("--f-min", type=float, default=config.DEFAULT_F_MIN_HZ)
    synth.add_argument("--f-max", type=float, default=config.DEFAULT_F_MAX_HZ)
    synth.add_argument("--lines", type=int, default=config.DEFAULT_LINES)
    synth.add_argument("--alpha", type=float, help="Multiplicative noise level (default: 0)")
    _add_common(synth)
    synth.set_defaults(func=cmd_synth)

    fit = sub.add_parser("fit", help="Run the stability-diagram sweeps on an FRF file")
    fit.add_argument("frf", help="FRF file (.csv or .json)")
    fit.add_argument("--format", choices=["csv", "json"], help="Override the suffix")
    fit.add_argument("--order", type=int, help=f"Maximum model order (default: {config.DEFAULT_ORDER})")
    fit.add_argument("--method", choices=["conventional", "omp", "both"], help="Default: both")
    fit.add_argument(
        "--threshold",
        type=float,
        help=f"Relative frequency consistency window (default: {config.DEFAULT_THRESHOLD_REL})",
    )
    fit.add_argument(
        "--lambda-ratio",
        dest="lambda_ratio",
        type=float,
        help=f"LASSO lambda / lambda_max (default: {config.DEFAULT_LAMBDA_RATIO})",
    )
    fit.add_argument(
        "--min-streak",
        dest="min_streak",
        type=int,
        help=f"Orders a cluster must span (default: {config.DEFAULT_MIN_STREAK})",
    )
    _add_common(fit)
    fit.set_defaults(func=cmd_fit)

    compare = sub.add_parser("compare", help="Frequency/damping errors and MAC of two modes.json")
    compare.add_argument("modes_a")
    compare.add_argument("modes_b")
    _add_common(compare)
    compare.set_defaults(func=cmd_compare)

    study = sub.add_parser("roots-study", help="Root placement of random sparse polynomials")
    study.add_argument("--degree", type=int, default=config.DEFAULT_STUDY_DEGREE)
    study.add_argument(
        "--counts",
        type=_counts,
        default=list(config.DEFAULT_STUDY_COUNTS),
        help="Comma-separated nonzero counts (default: 100,70,30,5)",
    )
    study.add_argument("--trials", type=int, default=config.DEFAULT_STUDY_TRIALS)
    study.add_argument(
        "--coeff-scale",
        dest="coeff_scale",
        type=float,
        default=config.DEFAULT_STUDY_COEFF_SCALE,
        help=f"Re and Im drawn from Uniform(-s, s) (default: {config.DEFAULT_STUDY_COEFF_SCALE})",
    )
    study.add_argument("--roots-out", dest="roots_out", help="Also write every root to this CSV")
    _add_common(study)
    study.set_defaults(func=cmd_roots_study)
    return parser


def _report(payload: ErrorPayload) -> None:
    print(payload.one_line(), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        _report(ErrorPayload(code=ErrorCode.invalid_input, message=str(exc)))
        return EXIT_USAGE
    except ModalSparseError as exc:
        _report(exc.to_payload())
        return EXIT_FAILURE
    except OSError as exc:
        _report(ErrorPayload(code=ErrorCode.io_error, message=str(exc)))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
