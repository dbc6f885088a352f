"""FRF datasets: grid bookkeeping, files, analytic synthesis and noise."""

from .data import FrequencyGrid, FrfSet, ModalModel, Mode, frequency_grid, sampling_period
from .io import load_frf, load_modal_model, save_frf, save_modal_model
from .synthesis import inject_noise, modal_superposition, synthesize_frf

__all__ = [
    "FrequencyGrid",
    "FrfSet",
    "ModalModel",
    "Mode",
    "frequency_grid",
    "sampling_period",
    "load_frf",
    "load_modal_model",
    "save_frf",
    "save_modal_model",
    "inject_noise",
    "modal_superposition",
    "synthesize_frf",
]
