"""Pydantic models for every JSON file modalsparse reads or writes.

Edited by hand; ``contracts/*.schema.json`` is generated from here via
``make_schema.py``. Field names are snake_case and go into the files as-is.

Complex numbers are ``[re, im]`` pairs. JSON floats are written with Python's
shortest round-trip repr, so a JSON file read back is bit-identical.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator

# Bump on any breaking change to the file layouts below.
FILE_CONTRACT_VERSION = "1.0.0"

ComplexPair = tuple[float, float]


class ModeRecord(BaseModel):
    """One identified or prescribed mode."""

    model_config = {"extra": "forbid"}

    f_hz: float = Field(gt=0, description="Undamped natural frequency in Hz")
    zeta: float = Field(description="Damping ratio; synthesis requires 0 < zeta < 1")
    residues: list[ComplexPair] = Field(
        default_factory=list,
        description="Complex residue per output, [re, im]; the mode shape",
    )


class ModalModelFile(BaseModel):
    """A ``modes.json``: input to ``synth``, output of ``fit``."""

    # Tolerate provenance extras (method, order) that fit stamps on its output.
    model_config = {"extra": "allow"}

    modes: list[ModeRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _same_output_count(self) -> "ModalModelFile":
        counts = {len(mode.residues) for mode in self.modes}
        if len(counts) > 1:
            raise ValueError(f"modes disagree on the number of outputs: {sorted(counts)}")
        return self


class FrfChannel(BaseModel):
    model_config = {"extra": "forbid"}

    re: list[float]
    im: list[float]
    w: list[float] | None = Field(default=None, description="Per-line weight, >= 0")

    @model_validator(mode="after")
    def _aligned(self) -> "FrfChannel":
        if len(self.re) != len(self.im):
            raise ValueError("re and im must have the same length")
        if self.w is not None and len(self.w) != len(self.re):
            raise ValueError("w must have one entry per frequency line")
        return self


class FrfFile(BaseModel):
    """The JSON form of an FRF set: one channel per output."""

    model_config = {"extra": "forbid"}

    ts_seconds: float | None = Field(default=None, gt=0)
    freq_hz: list[float]
    outputs: list[FrfChannel] = Field(min_length=1)

    @model_validator(mode="after")
    def _channels_match_grid(self) -> "FrfFile":
        for index, channel in enumerate(self.outputs):
            if len(channel.re) != len(self.freq_hz):
                raise ValueError(
                    f"output {index} has {len(channel.re)} lines, grid has {len(self.freq_hz)}"
                )
        return self


class MethodReport(BaseModel):
    """One method's summary in ``fit_report.json``."""

    model_config = {"extra": "forbid"}

    method: str
    order: int = Field(ge=1)
    sparsity_k: int | None = Field(default=None, description="OMP iteration count; omp only")
    lasso_lambda: float | None = None
    n_modes: int = Field(ge=0)
    n_stable: int = Field(ge=0)
    n_unstable: int = Field(ge=0)
    n_spurious: int = Field(ge=0, description="Stable in-band poles with no lower-order witness")
    skipped_orders: list[int] = Field(default_factory=list)
    mse: float = Field(
        ge=0,
        description="Curve-fit MSE of the re-synthesized FRF (all zeros when no mode was found)",
    )


class FitReport(BaseModel):
    model_config = {"extra": "forbid"}

    version: str = FILE_CONTRACT_VERSION
    source: str
    threshold_rel: float
    min_streak: int
    methods: list[MethodReport]
