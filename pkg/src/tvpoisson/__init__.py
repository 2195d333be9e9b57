"""Total-variation Poisson denoising toolkit.

Images are plain 2-D float64 numpy arrays (row-major, gray levels nominally
in [0, 255]). The package provides grayscale PGM/PNG I/O, seeded Poisson
corruption, the positivity-preserving semi-implicit solver with its explicit
baseline, PSNR/SSIM scoring, and a benchmarking CLI (``tvpoisson``).
"""

from .errors import DomainError, FormatError, NumericalError, ShapeError
from .images import as_image, quantize, read_image, write_image
from .metrics import MetricReport, measure, psnr, ssim
from .noise import NoiseSpec, add_poisson_noise
from .operators import (
    DEFAULT_EPSILON,
    EnergyValue,
    curvature,
    energy,
    grad_magnitude_eps,
    gradient,
)
from .solver import (
    EXPLICIT,
    SEMI_IMPLICIT,
    DenoiseResult,
    IterationRecord,
    SolverParams,
    denoise,
    solve_pixel_quadratic,
    step_explicit,
    step_semi_implicit,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPSILON",
    "EXPLICIT",
    "SEMI_IMPLICIT",
    "DenoiseResult",
    "DomainError",
    "EnergyValue",
    "FormatError",
    "IterationRecord",
    "MetricReport",
    "NoiseSpec",
    "NumericalError",
    "ShapeError",
    "SolverParams",
    "add_poisson_noise",
    "as_image",
    "curvature",
    "denoise",
    "energy",
    "grad_magnitude_eps",
    "gradient",
    "measure",
    "psnr",
    "quantize",
    "read_image",
    "ssim",
    "solve_pixel_quadratic",
    "step_explicit",
    "step_semi_implicit",
    "write_image",
]
