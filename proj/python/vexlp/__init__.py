"""Variable-exponent Lebesgue space numerics (grid functions, Luxemburg norms,
mollifiers, maximal operator, Herz norms) and the experiment CLI."""

from ._core import (
    ConfigError,
    Error,
    Exponent,
    Function,
    Grid,
    Kernel,
    Measure,
    convolve,
    dual_pairing,
    herz_norm,
    hoelder_constant,
    maximal,
    modular,
    norm,
    radius_ladder,
    run_cli,
)

__all__ = [
    "ConfigError",
    "Error",
    "Exponent",
    "Function",
    "Grid",
    "Kernel",
    "Measure",
    "convolve",
    "dual_pairing",
    "herz_norm",
    "hoelder_constant",
    "maximal",
    "modular",
    "norm",
    "radius_ladder",
    "run_cli",
]
