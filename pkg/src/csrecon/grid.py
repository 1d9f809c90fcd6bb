"""Complex image/k-space containers, centered unitary DFTs, masking, zero-fill.

All spectra use the centered convention: the zero frequency sits at index
(rows // 2, cols // 2), so low-frequency regions are centered rectangles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.fft import fft2, fftshift, ifft2, ifftshift

SPACE = "space"
FREQUENCY = "frequency"


def _as_complex_2d(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D array, got shape {arr.shape}")
    arr = np.array(arr, order="C")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ImageGrid:
    """A 2-D grid of complex samples tagged with its domain (space or frequency)."""

    data: np.ndarray
    domain: str

    def __post_init__(self):
        if self.domain not in (SPACE, FREQUENCY):
            raise ValueError(f"unknown domain {self.domain!r}")
        object.__setattr__(self, "data", _as_complex_2d(self.data))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def centered_slices(rows: int, cols: int, extent: tuple[int, int]) -> tuple[slice, slice]:
    """Slices of the centered (height, width) rectangle around the zero-frequency cell."""
    h, w = int(extent[0]), int(extent[1])
    if not (0 < h <= rows and 0 < w <= cols):
        raise ValueError(f"extent {extent} does not fit a {rows}x{cols} grid")
    r0 = rows // 2 - h // 2
    c0 = cols // 2 - w // 2
    return slice(r0, r0 + h), slice(c0, c0 + w)


@dataclass(frozen=True)
class SampleMask:
    """Boolean grid of collected Fourier locations, optionally with a fully-sampled
    center rectangle (fsr = (height, width) in grid cells)."""

    flags: np.ndarray
    fsr: tuple[int, int] | None = None

    def __post_init__(self):
        flags = np.asarray(self.flags, dtype=bool)
        if flags.ndim != 2 or flags.size == 0:
            raise ValueError(f"mask flags must be a non-empty 2-D array, got {flags.shape}")
        flags = np.array(flags, order="C")
        flags.flags.writeable = False
        object.__setattr__(self, "flags", flags)
        if self.fsr is not None:
            fsr = (int(self.fsr[0]), int(self.fsr[1]))
            object.__setattr__(self, "fsr", fsr)
            sl = centered_slices(self.rows, self.cols, fsr)
            if not flags[sl].all():
                raise ValueError("mask declares an FSR but not all FSR cells are sampled")
        if self.count == 0:
            raise ValueError("mask must sample at least one location")

    @property
    def rows(self) -> int:
        return self.flags.shape[0]

    @property
    def cols(self) -> int:
        return self.flags.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.flags.shape

    @property
    def count(self) -> int:
        return int(self.flags.sum())

    def fsr_slices(self) -> tuple[slice, slice]:
        if self.fsr is None:
            raise ValueError("mask has no fully-sampled center region")
        return centered_slices(self.rows, self.cols, self.fsr)


@dataclass(frozen=True)
class Measurements:
    """Collected k-space values in canonical (row-major over true flags) order."""

    mask: SampleMask
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128).ravel()
        if values.size != self.mask.count:
            raise ValueError(
                f"got {values.size} values for a mask with {self.mask.count} samples"
            )
        values = np.array(values, order="C")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def dft2_unitary(img: ImageGrid) -> ImageGrid:
    """Centered unitary 2-D DFT: space -> frequency, zero frequency at the grid center."""
    if img.domain != SPACE:
        raise ValueError(f"dft2_unitary expects a space-domain grid, got {img.domain!r}")
    ksp = fftshift(fft2(ifftshift(img.data), norm="ortho"))
    return ImageGrid(ksp, FREQUENCY)


def idft2_unitary(ksp: ImageGrid) -> ImageGrid:
    """Inverse (= adjoint) of dft2_unitary: frequency -> space."""
    if ksp.domain != FREQUENCY:
        raise ValueError(f"idft2_unitary expects a frequency-domain grid, got {ksp.domain!r}")
    img = fftshift(ifft2(ifftshift(ksp.data), norm="ortho"))
    return ImageGrid(img, SPACE)


def sample(ksp: ImageGrid, mask: SampleMask) -> Measurements:
    """Pick the k-space entries at the mask's true flags, row-major order."""
    if ksp.domain != FREQUENCY:
        raise ValueError("sample operates on frequency-domain grids")
    if ksp.shape != mask.shape:
        raise ValueError(f"grid shape {ksp.shape} != mask shape {mask.shape}")
    return Measurements(mask, ksp.data[mask.flags])


def embed(meas: Measurements) -> ImageGrid:
    """Place measured values back on a zero-filled k-space grid."""
    grid = np.zeros(meas.mask.shape, dtype=np.complex128)
    grid[meas.mask.flags] = meas.values
    return ImageGrid(grid, FREQUENCY)


def zero_fill(meas: Measurements) -> ImageGrid:
    """Reconstruction assuming every unsampled k-space value is zero."""
    return idft2_unitary(embed(meas))


def add_noise(meas: Measurements, sigma: float, seed: int) -> Measurements:
    """Add i.i.d. complex Gaussian noise (per-component variance sigma^2 / 2)."""
    if sigma < 0:
        raise ValueError(f"noise sigma must be nonnegative, got {sigma}")
    if sigma == 0:
        return meas
    rng = np.random.default_rng(seed)
    n = meas.values.size
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * (sigma / np.sqrt(2))
    return Measurements(meas.mask, meas.values + noise)
