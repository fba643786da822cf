"""Edge-preserving image denoising."""

from ._core import (
    DataError,
    DenoiseParams,
    IoError,
    add_noise,
    box3,
    default_params,
    denoise,
    detect_edges,
    rmse,
    run_bench,
    synth,
)

__all__ = [
    "DataError",
    "DenoiseParams",
    "IoError",
    "add_noise",
    "box3",
    "default_params",
    "denoise",
    "detect_edges",
    "rmse",
    "run_bench",
    "synth",
]
__version__ = "0.1.0"
