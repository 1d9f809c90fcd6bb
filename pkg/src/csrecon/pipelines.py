"""End-to-end reconstruction for the three problem forms.

- bpd: weighted-l1 recovery on the raw measurements.
- bpd_mask: same, but low-frequency coefficients are never penalized
  (their weights are zero and stay zero through reweighting).
- sbpd: subtract a blurry estimate built from the fully-sampled center
  region, solve for the residual details, add the estimate back.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dictionary import WAVCURV, CURVELET, WAVELET, Dictionary
from .grid import ImageGrid, Measurements, dft2_unitary, embed, idft2_unitary, sample, zero_fill
from .lowfreq import DEFAULT_KAISER_BETA, blurry_estimate, choose_window, residual_data
from .solver import LassoProblem, SolveReport, initial_lambda, reweighted_solve
from .wavelet import wavelet_lowfreq_extent

BPD = "bpd"
BPD_MASK = "bpd_mask"
SBPD = "sbpd"
METHODS = (BPD, BPD_MASK, SBPD)


@dataclass
class ReconResult:
    image: ImageGrid
    coeffs: np.ndarray = field(repr=False)
    reports: list[SolveReport] = field(repr=False)
    x_low: ImageGrid | None = None


def make_operators(dic: Dictionary, mask):
    """Flat-coefficient closures for A = M F Psi^* and its adjoint."""

    def forward(y: np.ndarray) -> np.ndarray:
        img = dic.adjoint(dic.unflatten(y))
        return sample(dft2_unitary(img), mask).values

    def adjoint(v: np.ndarray) -> np.ndarray:
        img = idft2_unitary(embed(Measurements(mask, v)))
        return dic.forward(img).flatten()

    return forward, adjoint


def _make_dictionary(meas: Measurements, mode: str, dic: Dictionary | None,
                     levels: int, nscales: int | None, nangles_coarse: int) -> Dictionary:
    if dic is not None:
        if dic.mode != mode:
            raise ValueError(f"dictionary mode {dic.mode!r} != requested {mode!r}")
        return dic
    return Dictionary(meas.mask.rows, meas.mask.cols, mode, levels=levels,
                      nscales=nscales, nangles_coarse=nangles_coarse)


def _solve(dic: Dictionary, meas: Measurements, lam: np.ndarray, y0: np.ndarray,
           max_iters: int, n_reweights: int) -> tuple[np.ndarray, list[SolveReport]]:
    forward, adjoint = make_operators(dic, meas.mask)
    prob = LassoProblem(forward, adjoint, meas.values, lam, y0, max_iters=max_iters)
    return reweighted_solve(prob, n_reweights)


def reconstruct_bpd(meas: Measurements, mode: str = WAVCURV, *, dic: Dictionary | None = None,
                    levels: int = 4, nscales: int | None = None, nangles_coarse: int = 16,
                    max_iters: int = 100, n_reweights: int = 5) -> ReconResult:
    """Basis-pursuit-denoising reconstruction (Lagrangian form)."""
    dic = _make_dictionary(meas, mode, dic, levels, nscales, nangles_coarse)
    zf = zero_fill(meas)
    lam = initial_lambda(zf, dic).values
    y0 = dic.forward(zf).flatten()
    y, reports = _solve(dic, meas, lam, y0, max_iters, n_reweights)
    return ReconResult(dic.adjoint(dic.unflatten(y)), y, reports)


def reconstruct_bpd_masked(meas: Measurements, mode: str = WAVCURV, *, dic: Dictionary | None = None,
                           levels: int = 4, nscales: int | None = None, nangles_coarse: int = 16,
                           max_iters: int = 100, n_reweights: int = 5) -> ReconResult:
    """BPD with the low-frequency bins unpenalized (weight mask zeros)."""
    dic = _make_dictionary(meas, mode, dic, levels, nscales, nangles_coarse)
    zf = zero_fill(meas)
    lam = initial_lambda(zf, dic).values * dic.lowfreq_weight_mask().values
    y0 = dic.forward(zf).flatten()
    y, reports = _solve(dic, meas, lam, y0, max_iters, n_reweights)
    return ReconResult(dic.adjoint(dic.unflatten(y)), y, reports)


def reconstruct_sbpd(meas: Measurements, mode: str = WAVCURV, *, dic: Dictionary | None = None,
                     levels: int = 4, nscales: int | None = None, nangles_coarse: int = 16,
                     max_iters: int = 100, n_reweights: int = 5,
                     kaiser_beta: float = DEFAULT_KAISER_BETA) -> ReconResult:
    """Structured BPD: blurry estimate from the FSR, then solve for the details."""
    dic = _make_dictionary(meas, mode, dic, levels, nscales, nangles_coarse)
    required = dic.fsr_extent()
    fsr = meas.mask.fsr
    if fsr is None or fsr[0] < required[0] or fsr[1] < required[1]:
        raise ValueError(
            f"structured BPD requires a fully-sampled center region of at least "
            f"{required[0]}x{required[1]} cells (mask has {fsr})"
        )
    wav_ext = wavelet_lowfreq_extent(dic.rows, dic.cols, dic.levels) \
        if mode in (WAVELET, WAVCURV) else None
    geom = dic.geometry if mode in (CURVELET, WAVCURV) else None
    window = choose_window(wav_ext, geom, kaiser_beta)
    x_low = blurry_estimate(meas, window)
    resid = residual_data(meas, x_low)
    zf = zero_fill(resid)
    lam = initial_lambda(zf, dic).values
    y0 = dic.forward(zf).flatten()
    y, reports = _solve(dic, resid, lam, y0, max_iters, n_reweights)
    details = dic.adjoint(dic.unflatten(y))
    image = ImageGrid(x_low.data + details.data, "space")
    return ReconResult(image, y, reports, x_low=x_low)


def reconstruct(method: str, meas: Measurements, mode: str = WAVCURV, **kwargs) -> ReconResult:
    if method == BPD:
        return reconstruct_bpd(meas, mode, **kwargs)
    if method == BPD_MASK:
        return reconstruct_bpd_masked(meas, mode, **kwargs)
    if method == SBPD:
        return reconstruct_sbpd(meas, mode, **kwargs)
    raise ValueError(f"unknown method {method!r}")
