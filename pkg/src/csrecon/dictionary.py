"""The sparsifying transform: wavelet, curvelet, or both stacked (wavCurv).

In wavCurv mode each block is scaled by 1/sqrt(2) so the stacked frame stays
Parseval and one solver step-size configuration serves all modes. Flattened
coefficient order is wavelet block first, then curvelet tiles in (scale,
angle) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curvelet as cvt
from . import wavelet as wvt
from .grid import SPACE, ImageGrid

WAVELET = "wavelet"
CURVELET = "curvelet"
WAVCURV = "wavCurv"
MODES = (WAVELET, CURVELET, WAVCURV)

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class DictCoeffs:
    """Coefficients under the active dictionary; the optimization variable."""

    mode: str
    wavelet: wvt.WaveletPyramid | None = None
    curvelet: cvt.CurveletPyramid | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown dictionary mode {self.mode!r}")
        if self.mode in (WAVELET, WAVCURV) and self.wavelet is None:
            raise ValueError(f"mode {self.mode!r} requires a wavelet block")
        if self.mode in (CURVELET, WAVCURV) and self.curvelet is None:
            raise ValueError(f"mode {self.mode!r} requires a curvelet block")

    def flatten(self) -> np.ndarray:
        parts = []
        if self.wavelet is not None:
            parts.append(self.wavelet.data.ravel())
        if self.curvelet is not None:
            parts.append(self.curvelet.flatten())
        return np.concatenate(parts)

    @property
    def size(self) -> int:
        n = 0
        if self.wavelet is not None:
            n += self.wavelet.data.size
        if self.curvelet is not None:
            n += self.curvelet.coeff_count
        return n


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights aligned with the flattened coefficient order."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).ravel()
        if values.size and values.min() < 0:
            raise ValueError("weights must be nonnegative")
        values = np.array(values, order="C")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.values.size


class Dictionary:
    """Mode + transform parameters bound to a grid shape; pure and shareable."""

    def __init__(self, rows: int, cols: int, mode: str = WAVCURV, levels: int = 4,
                 geometry: cvt.CurveletGeometry | None = None,
                 nscales: int | None = None, nangles_coarse: int = 16):
        if mode not in MODES:
            raise ValueError(f"unknown dictionary mode {mode!r}")
        self.rows = int(rows)
        self.cols = int(cols)
        self.mode = mode
        self.levels = wvt.clamp_levels(rows, cols, levels) if mode != CURVELET else levels
        if mode == CURVELET:
            self.geometry = geometry or cvt.CurveletGeometry(rows, cols, nscales, nangles_coarse)
        elif mode == WAVCURV:
            self.geometry = geometry or cvt.CurveletGeometry(rows, cols, nscales, nangles_coarse)
        else:
            self.geometry = None
        if self.geometry is not None and (self.geometry.rows, self.geometry.cols) != (self.rows, self.cols):
            raise ValueError("curvelet geometry shape does not match the dictionary shape")

    @property
    def coeff_count(self) -> int:
        n = 0
        if self.mode in (WAVELET, WAVCURV):
            n += self.rows * self.cols
        if self.mode in (CURVELET, WAVCURV):
            n += self.geometry.coeff_count
        return n

    @property
    def wavelet_count(self) -> int:
        return self.rows * self.cols if self.mode in (WAVELET, WAVCURV) else 0

    def forward(self, img: ImageGrid) -> DictCoeffs:
        """Psi: image -> coefficients; Parseval in every mode."""
        if img.shape != (self.rows, self.cols):
            raise ValueError(f"image shape {img.shape} != dictionary shape {(self.rows, self.cols)}")
        scale = _INV_SQRT2 if self.mode == WAVCURV else 1.0
        wav = cur = None
        if self.mode in (WAVELET, WAVCURV):
            pyr = wvt.ddwt4_forward(img, self.levels)
            wav = wvt.WaveletPyramid(pyr.data * scale, self.levels) if scale != 1.0 else pyr
        if self.mode in (CURVELET, WAVCURV):
            pyr = cvt.fdct_forward(img, self.geometry)
            if scale != 1.0:
                pyr = cvt.CurveletPyramid(pyr.rows, pyr.cols,
                                          tuple(t * scale for t in pyr.tiles))
            cur = pyr
        return DictCoeffs(self.mode, wav, cur)

    def adjoint(self, coeffs: DictCoeffs) -> ImageGrid:
        """Psi^*: coefficients -> image; inverse of forward (tight frame)."""
        if coeffs.mode != self.mode:
            raise ValueError(f"coefficients are {coeffs.mode!r}, dictionary is {self.mode!r}")
        scale = _INV_SQRT2 if self.mode == WAVCURV else 1.0
        out = np.zeros((self.rows, self.cols), dtype=np.complex128)
        if coeffs.wavelet is not None:
            out += scale * wvt.ddwt4_inverse(coeffs.wavelet).data
        if coeffs.curvelet is not None:
            out += scale * cvt.fdct_adjoint(coeffs.curvelet, self.geometry).data
        return ImageGrid(out, SPACE)

    def flatten(self, coeffs: DictCoeffs) -> np.ndarray:
        return coeffs.flatten()

    def unflatten(self, vec: np.ndarray) -> DictCoeffs:
        vec = np.asarray(vec, dtype=np.complex128).ravel()
        if vec.size != self.coeff_count:
            raise ValueError(f"vector length {vec.size} != coefficient count {self.coeff_count}")
        wav = cur = None
        pos = 0
        if self.mode in (WAVELET, WAVCURV):
            n = self.rows * self.cols
            wav = wvt.WaveletPyramid(vec[:n].reshape(self.rows, self.cols), self.levels)
            pos = n
        if self.mode in (CURVELET, WAVCURV):
            cur = cvt.unflatten_curvelet(vec[pos:], self.geometry)
        return DictCoeffs(self.mode, wav, cur)

    def lowfreq_indices(self) -> np.ndarray:
        """Flat indices of the wavelet approximation bin and/or curvelet coarse tile."""
        idx = []
        pos = 0
        if self.mode in (WAVELET, WAVCURV):
            h, w = wvt.wavelet_lowfreq_extent(self.rows, self.cols, self.levels)
            grid = np.arange(self.rows * self.cols).reshape(self.rows, self.cols)
            idx.append(grid[:h, :w].ravel())
            pos = self.rows * self.cols
        if self.mode in (CURVELET, WAVCURV):
            n0 = self.geometry.tile(0, 0).window.size
            idx.append(np.arange(pos, pos + n0))
        return np.concatenate(idx)

    def lowfreq_weight_mask(self) -> WeightVector:
        """omega: 0 on the lowest-frequency bins, 1 elsewhere."""
        values = np.ones(self.coeff_count)
        values[self.lowfreq_indices()] = 0.0
        return WeightVector(values)

    def fsr_extent(self) -> tuple[int, int]:
        """Elementwise max of the active transforms' low-frequency extents."""
        extents = []
        if self.mode in (WAVELET, WAVCURV):
            extents.append(wvt.wavelet_lowfreq_extent(self.rows, self.cols, self.levels))
        if self.mode in (CURVELET, WAVCURV):
            extents.append(cvt.curvelet_lowfreq_extent(self.geometry))
        h = max(e[0] for e in extents)
        w = max(e[1] for e in extents)
        return h, w
