"""Seeded Poisson corruption of gray-level images.

Each pixel value is used directly as the mean of an independent Poisson draw
(no photon-count rescaling). Sampling is pinned to a fixed, documented
algorithm so a given seed reproduces bit-identical noise on any platform:

* every pixel owns a SplitMix64 stream derived from ``(seed, flat index)``,
  so the image can be corrupted in any chunking/parallel order without
  changing the output;
* means below 30 use inversion by sequential search (one uniform per draw);
* means of 30 and above use Hormann's PTRS transformed-rejection sampler
  (two uniforms per attempt), which is exact, not a normal approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .images import as_image

__all__ = ["NoiseSpec", "add_poisson_noise"]

POISSON_PER_PIXEL = "poisson-per-pixel"

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX_1 = _U64(0xBF58476D1CE4E5B9)
_MIX_2 = _U64(0x94D049BB133111EB)
_U01_SCALE = 2.0**-53
# Inversion walks the CDF upward; the cap bounds the walk at a point whose
# tail mass is far below the 2^-53 resolution of one uniform draw.
_INVERSION_LAMBDA_MAX = 30.0


@dataclass(frozen=True)
class NoiseSpec:
    """Corruption recipe: 64-bit seed plus the (single) noise model."""

    seed: int
    model: str = POISSON_PER_PIXEL

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.model != POISSON_PER_PIXEL:
            raise ValueError(f"unknown noise model {self.model!r}")


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 output scrambler (David Stafford's mix13 finalizer)."""
    z = (z ^ (z >> _U64(30))) * _MIX_1
    z = (z ^ (z >> _U64(27))) * _MIX_2
    return z ^ (z >> _U64(31))

def _stream_states(seed: int, index: np.ndarray) -> np.ndarray:
    """Initial SplitMix64 state for each pixel stream, from (seed, index)."""
    base = _mix64(np.array([seed], dtype=np.uint64))
    return _mix64(base + (index.astype(np.uint64) + _U64(1)) * _GOLDEN)

def _next_u01(state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Advance each stream one step; return (new state, uniforms in [0, 1))."""
    state = state + _GOLDEN
    return state, (_mix64(state) >> _U64(11)).astype(np.float64) * _U01_SCALE


def _sample_inversion(lam: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Poisson draws for small means: invert the CDF by sequential search."""
    _, u = _next_u01(states)
    k = np.zeros(lam.size)
    p = np.exp(-lam)
    cdf = p.copy()
    cap = np.ceil(lam + 12.0 * np.sqrt(lam + 1.0) + 60.0)
    active = u > cdf
    while active.any():
        k[active] += 1.0
        p[active] *= lam[active] / k[active]
        cdf[active] += p[active]
        active &= (u > cdf) & (k < cap)
    return k


def _sample_ptrs(lam: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Poisson draws for lam >= 30 via the PTRS transformed-rejection method.

    Constants follow Hormann (1993), valid for lam >= 10. Each attempt
    consumes exactly two uniforms from the pixel's own stream, keeping the
    draw count per pixel well defined under any evaluation order.
    """
    b = 0.931 + 2.53 * np.sqrt(lam)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_lam = np.log(lam)

    out = np.empty(lam.size)
    alive = np.arange(lam.size)
    while alive.size:
        st = states[alive]
        st, u = _next_u01(st)
        st, v = _next_u01(st)
        states[alive] = st

        u -= 0.5
        us = 0.5 - np.abs(u)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            k = np.floor((2.0 * a[alive] / us + b[alive]) * u + lam[alive] + 0.43)
            fast_accept = (us >= 0.07) & (v <= v_r[alive])
            fast_reject = (k < 0.0) | ((us < 0.013) & (v > us))
            lhs = np.log(v * inv_alpha[alive] / (a[alive] / (us * us) + b[alive]))
            rhs = k * log_lam[alive] - lam[alive] - gammaln(k + 1.0)
            accept = fast_accept | (~fast_reject & (lhs <= rhs))
        out[alive[accept]] = k[accept]
        alive = alive[~accept]
    return out


def _poisson_field(lam: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Sample one Poisson value per entry, each from its own stream."""
    out = np.empty(lam.size)
    small = lam < _INVERSION_LAMBDA_MAX
    if small.any():
        out[small] = _sample_inversion(lam[small], states[small])
    large = ~small
    if large.any():
        out[large] = _sample_ptrs(lam[large], states[large].copy())
    return out


def add_poisson_noise(img, spec: NoiseSpec) -> np.ndarray:
    """Corrupt an image with per-pixel Poisson noise.

    Each output pixel is an independent Poisson sample whose mean is the
    corresponding input pixel value; zero pixels therefore stay exactly
    zero. The result is a float64 image of (integer-valued) counts, not
    clamped: quantization to storage range happens only at file write.

    Raises :class:`DomainError` if any input pixel is negative.
    """
    arr = as_image(img)
    if (arr < 0.0).any():
        raise DomainError("Poisson means must be nonnegative")
    flat = arr.ravel()
    states = _stream_states(spec.seed, np.arange(flat.size, dtype=np.uint64))
    return _poisson_field(flat, states).reshape(arr.shape)
