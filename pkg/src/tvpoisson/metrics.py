"""PSNR and SSIM fidelity metrics for 8-bit range grayscale images.

PSNR uses a fixed peak of 255 regardless of the actual image maximum. SSIM
is the standard single-scale formulation: 11x11 Gaussian window with sigma
1.5, C1 = (0.01*255)^2, C2 = (0.03*255)^2, averaged over all fully interior
window positions (no padding, no downsampling pre-pass).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .errors import DomainError, ShapeError
from .images import as_image

__all__ = ["MetricReport", "measure", "psnr", "ssim"]

PEAK = 255.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
_C1 = (0.01 * PEAK) ** 2
_C2 = (0.03 * PEAK) ** 2


def _gaussian_window() -> np.ndarray:
    offsets = np.arange(SSIM_WINDOW, dtype=np.float64) - (SSIM_WINDOW - 1) / 2.0
    g = np.exp(-(offsets**2) / (2.0 * SSIM_SIGMA**2))
    window = np.outer(g, g)
    return window / window.sum()


_WINDOW = _gaussian_window()


@dataclass(frozen=True)
class MetricReport:
    """PSNR (dB, +inf for identical inputs) and SSIM (in [-1, 1])."""

    psnr: float
    ssim: float


def _check_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a_arr = as_image(a)
    b_arr = as_image(b)
    if a_arr.shape != b_arr.shape:
        raise ShapeError(f"shapes differ: {a_arr.shape} vs {b_arr.shape}")
    return a_arr, b_arr


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio 10*log10(255^2 / MSE); +inf when MSE = 0."""
    a_arr, b_arr = _check_pair(a, b)
    mse = float(np.mean((a_arr - b_arr) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / mse)


def ssim(a, b) -> float:
    """Mean structural similarity over all valid 11x11 window positions.

    Local means, variances and covariance are Gaussian-weighted; each window
    scores ((2*mu_a*mu_b + C1)(2*cov + C2)) / ((mu_a^2 + mu_b^2 + C1)
    (var_a + var_b + C2)). Requires both image sides to be at least the
    window size.
    """
    a_arr, b_arr = _check_pair(a, b)
    if min(a_arr.shape) < SSIM_WINDOW:
        raise DomainError(
            f"image sides must be >= {SSIM_WINDOW} for SSIM, got {a_arr.shape}"
        )
    mu_a = convolve2d(a_arr, _WINDOW, mode="valid")
    mu_b = convolve2d(b_arr, _WINDOW, mode="valid")
    var_a = convolve2d(a_arr * a_arr, _WINDOW, mode="valid") - mu_a * mu_a
    var_b = convolve2d(b_arr * b_arr, _WINDOW, mode="valid") - mu_b * mu_b
    cov = convolve2d(a_arr * b_arr, _WINDOW, mode="valid") - mu_a * mu_b
    score = ((2.0 * mu_a * mu_b + _C1) * (2.0 * cov + _C2)) / (
        (mu_a * mu_a + mu_b * mu_b + _C1) * (var_a + var_b + _C2)
    )
    return float(np.mean(score))


def measure(reference, test) -> MetricReport:
    """Score a test image against a clean reference with both metrics."""
    return MetricReport(psnr=psnr(reference, test), ssim=ssim(reference, test))
