"""Naive, loop-structured reference implementations.

These deliberately share no code with the package: index clamping, sums and
root formulas are written out directly so they can serve as independent
oracles for the vectorized implementations.
"""

import math

import numpy as np

MASK64 = (1 << 64) - 1


def ref_mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def ref_stream_state(seed: int, index: int) -> int:
    base = ref_mix64(seed)
    return ref_mix64((base + (index + 1) * 0x9E3779B97F4A7C15) & MASK64)


def ref_next_u01(state: int) -> tuple[int, float]:
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    return state, (ref_mix64(state) >> 11) * 2.0**-53


def _cl(i: int, n: int) -> int:
    return min(max(i, 0), n - 1)


def naive_gradient(u):
    h, w = u.shape
    ux = np.zeros((h, w))
    uy = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            ux[i, j] = (u[i, _cl(j + 1, w)] - u[i, _cl(j - 1, w)]) / 2.0
            uy[i, j] = (u[_cl(i + 1, h), j] - u[_cl(i - 1, h), j]) / 2.0
    return ux, uy


def naive_magnitude(ux, uy, eps):
    h, w = ux.shape
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = math.sqrt(ux[i, j] ** 2 + uy[i, j] ** 2 + eps)
    return out


def naive_curvature(u, eps):
    """Single-pass stencil: unit normals recomputed locally per neighbor."""
    h, w = u.shape

    def gx(i, j):
        return (u[i, _cl(j + 1, w)] - u[i, _cl(j - 1, w)]) / 2.0

    def gy(i, j):
        return (u[_cl(i + 1, h), j] - u[_cl(i - 1, h), j]) / 2.0

    def nx(i, j):
        return gx(i, j) / math.sqrt(gx(i, j) ** 2 + gy(i, j) ** 2 + eps)

    def ny(i, j):
        return gy(i, j) / math.sqrt(gx(i, j) ** 2 + gy(i, j) ** 2 + eps)

    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = (nx(i, _cl(j + 1, w)) - nx(i, _cl(j - 1, w))) / 2.0 + (
                ny(_cl(i + 1, h), j) - ny(_cl(i - 1, h), j)
            ) / 2.0
    return out


def naive_energy(u, f, beta, eps):
    """Returns (total, tv, fidelity, valid) with sequential per-pixel sums."""
    h, w = u.shape
    tv = 0.0
    for i in range(h):
        for j in range(w):
            tv += math.sqrt(
                ((u[i, _cl(j + 1, w)] - u[i, _cl(j - 1, w)]) / 2.0) ** 2
                + ((u[_cl(i + 1, h), j] - u[_cl(i - 1, h), j]) / 2.0) ** 2
                + eps
            )
    fid = 0.0
    for i in range(h):
        for j in range(w):
            if f[i, j] > 0.0:
                if u[i, j] <= 0.0:
                    return math.nan, tv, math.nan, False
                fid += u[i, j] - f[i, j] * math.log(u[i, j])
            else:
                fid += u[i, j]
    return tv + beta * fid, tv, fid, True


def naive_pixel_root(u, kappa, f, tau, beta, pixel_floor):
    """Positive root of the per-pixel update quadratic, textbook formula."""
    a = -u - tau * (kappa - beta)
    b = -beta * tau * f
    if f == 0.0:
        return max(-a, pixel_floor)
    return (-a + math.sqrt(a * a - 4.0 * b)) / 2.0


def naive_semi_step(u, f, params):
    h, w = u.shape
    kappa = naive_curvature(u, params.epsilon)
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = naive_pixel_root(
                u[i, j], kappa[i, j], f[i, j], params.tau, params.beta,
                params.pixel_floor,
            )
    return out


def naive_explicit_step(u, f, params):
    h, w = u.shape
    kappa = naive_curvature(u, params.epsilon)
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = u[i, j] + params.tau * (
                kappa[i, j] + params.beta * (f[i, j] / u[i, j] - 1.0)
            )
    return out


def naive_psnr(a, b):
    h, w = a.shape
    total = 0.0
    for i in range(h):
        for j in range(w):
            total += (a[i, j] - b[i, j]) ** 2
    mse = total / (h * w)
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def _ssim_window():
    g = [math.exp(-((k - 5.0) ** 2) / (2.0 * 1.5**2)) for k in range(11)]
    win = np.array([[gi * gj for gj in g] for gi in g])
    return win / win.sum()


def naive_ssim(a, b):
    """Mean SSIM via explicit per-window weighted moments."""
    win = _ssim_window()
    c1 = (0.01 * 255.0) ** 2
    c2 = (0.03 * 255.0) ** 2
    h, w = a.shape
    scores = []
    for i in range(h - 10):
        for j in range(w - 10):
            pa = a[i : i + 11, j : j + 11]
            pb = b[i : i + 11, j : j + 11]
            mu_a = float((win * pa).sum())
            mu_b = float((win * pb).sum())
            var_a = float((win * pa * pa).sum()) - mu_a * mu_a
            var_b = float((win * pb * pb).sum()) - mu_b * mu_b
            cov = float((win * pa * pb).sum()) - mu_a * mu_b
            scores.append(
                ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
                / ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2))
            )
    return sum(scores) / len(scores)
