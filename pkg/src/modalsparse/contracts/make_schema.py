"""Generate the JSON Schema contracts from the Pydantic models.

Run after editing ``files.py``::

    python -m modalsparse.contracts.make_schema

The emitted schemas are the source of truth for anything that produces
modes.json / FRF JSON files outside this package. Do not edit the JSON by hand.
"""

import json
from pathlib import Path

from pydantic.json_schema import GenerateJsonSchema, models_json_schema

from .files import (
    FILE_CONTRACT_VERSION,
    FitReport,
    FrfFile,
    ModalModelFile,
)


def _build(models: list, title: str, description: str) -> dict:
    _, schema = models_json_schema(
        [(m, "validation") for m in models],
        ref_template="#/$defs/{model}",
        schema_generator=GenerateJsonSchema,
    )
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": title,
        "version": FILE_CONTRACT_VERSION,
        "description": description,
        "$defs": schema["$defs"],
    }


def build_schemas() -> dict[str, dict]:
    return {
        "modal_model.schema.json": _build(
            [ModalModelFile],
            "modalsparse Modal Model",
            "modes.json: natural frequency, damping ratio and complex residue "
            "vector per mode. Generated from modalsparse/contracts/files.py via "
            "make_schema.py; do not edit by hand.",
        ),
        "frf.schema.json": _build(
            [FrfFile],
            "modalsparse FRF Set",
            "JSON form of a single-input FRF set over a frequency grid.",
        ),
        "fit_report.schema.json": _build(
            [FitReport],
            "modalsparse Fit Report",
            "Per-method summary written by `modalsparse fit`.",
        ),
    }


def main() -> None:
    from modalsparse.config import CONTRACTS_DIR

    CONTRACTS_DIR.mkdir(parents=True, exist_ok=True)
    for name, payload in build_schemas().items():
        out = Path(CONTRACTS_DIR) / name
        out.write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
