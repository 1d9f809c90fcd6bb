"""Image quality metrics: relative error, MSE, MAE, and single-scale SSIM.

All metrics operate on magnitude images; complex inputs are reduced with abs()
first. SSIM follows the usual constants: 11x11 Gaussian window with sigma 1.5,
K1 = 0.01, K2 = 0.03, dynamic range L = 1.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve

from .grid import ImageGrid

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_L = 1.0


def _mag(x) -> np.ndarray:
    if isinstance(x, ImageGrid):
        x = x.data
    x = np.asarray(x)
    if np.iscomplexobj(x):
        x = np.abs(x)
    return x.astype(np.float64)


def _check_shapes(truth: np.ndarray, estimate: np.ndarray):
    if truth.shape != estimate.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {estimate.shape}")


def relative_error(truth, estimate) -> float:
    """||true - estimate||_2 / ||true||_2 on magnitudes."""
    t, e = _mag(truth), _mag(estimate)
    _check_shapes(t, e)
    denom = np.linalg.norm(t)
    if denom == 0:
        raise ValueError("relative error undefined for an all-zero truth")
    return float(np.linalg.norm(t - e) / denom)


def mse(truth, estimate) -> float:
    t, e = _mag(truth), _mag(estimate)
    _check_shapes(t, e)
    return float(np.mean((t - e) ** 2))


def mae(truth, estimate) -> float:
    t, e = _mag(truth), _mag(estimate)
    _check_shapes(t, e)
    return float(np.mean(np.abs(t - e)))


def _gaussian_kernel() -> np.ndarray:
    half = SSIM_WINDOW // 2
    g = np.exp(-0.5 * (np.arange(-half, half + 1) / SSIM_SIGMA) ** 2)
    k = np.outer(g, g)
    return k / k.sum()


def ssim(truth, estimate) -> float:
    """Mean local structural similarity over valid window positions."""
    t, e = _mag(truth), _mag(estimate)
    _check_shapes(t, e)
    if t.ndim != 2 or min(t.shape) < SSIM_WINDOW:
        raise ValueError(f"SSIM needs 2-D images at least {SSIM_WINDOW} pixels per side")
    kernel = _gaussian_kernel()
    c1 = (SSIM_K1 * SSIM_L) ** 2
    c2 = (SSIM_K2 * SSIM_L) ** 2

    conv = lambda a: fftconvolve(a, kernel, mode="valid")
    mu_t = conv(t)
    mu_e = conv(e)
    var_t = conv(t * t) - mu_t**2
    var_e = conv(e * e) - mu_e**2
    cov = conv(t * e) - mu_t * mu_e
    num = (2 * mu_t * mu_e + c1) * (2 * cov + c2)
    den = (mu_t**2 + mu_e**2 + c1) * (var_t + var_e + c2)
    return float(np.mean(num / den))


def metrics_report(truth, estimate) -> dict[str, float]:
    """The standard bundle reported per reconstruction."""
    return {
        "relative_error": relative_error(truth, estimate),
        "mse": mse(truth, estimate),
        "mae": mae(truth, estimate),
        "ssim": ssim(truth, estimate),
    }
