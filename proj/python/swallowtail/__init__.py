"""Singularities of band spectra of periodic Hamiltonian families."""

import json

from ._core import (
    REPORT_SCHEMA,
    IoError,
    ModelError,
    UsageError,
    __version__,
    char_poly,
    discriminant,
    dump_model,
    models,
    spectrum,
    stratum,
)
from . import _core

__all__ = [
    "REPORT_SCHEMA",
    "IoError",
    "ModelError",
    "UsageError",
    "analyze",
    "char_poly",
    "discriminant",
    "dump_model",
    "models",
    "region",
    "spectrum",
    "stratum",
]


def analyze(model, grid=8, region=False, region_grid=24):
    """Full analysis of a built-in model or model file, as the JSON report dict."""
    return json.loads(_core.analyze_json(model, grid, region, region_grid))


def region(model, grid=40, format="json"):
    """Sampled characteristic region. Dict for json, text for csv and svg."""
    text = _core.region_text(model, grid, format)
    return json.loads(text) if format == "json" else text
