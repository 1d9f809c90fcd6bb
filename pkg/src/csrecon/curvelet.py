"""Directional multiscale transform via frequency-wedge wrapping (tight frame).

The spectrum is split by smooth windows into a coarse isotropic square, dyadic
directional coronae, and an isotropic finest band. Each squared window sums to
one at every frequency cell, the support of each wedge is wrapped (cropped)
into its own rectangle, and a per-wedge unitary inverse DFT yields the
coefficient tile. That makes the transform an exact Parseval frame: the
adjoint is the inverse.

Window profile: Meyer-style ramp nu(t) = t^4 (35 - 84 t + 70 t^2 - 20 t^3),
which satisfies nu(t) + nu(1 - t) = 1, composed with cos/sin so that squared
radial and angular windows telescope to one. Radial cutoffs are dyadic in the
max-norm coordinate rho = max(|2u/rows|, |2v/cols|); angular wedges are
equispaced in angle with neighbors overlapping by one half-width.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.fft import fft2, fftshift, ifft2, ifftshift

from .grid import SPACE, ImageGrid, centered_slices


def _meyer_ramp(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t**4 * (35.0 - 84.0 * t + 70.0 * t**2 - 20.0 * t**3)


def _radial_lowpass(rho: np.ndarray, cutoff: float) -> np.ndarray:
    """1 inside cutoff/2, smooth decay to 0 at cutoff."""
    out = np.zeros(rho.shape)
    out[rho <= cutoff / 2] = 1.0
    band = (rho > cutoff / 2) & (rho < cutoff)
    s = (rho[band] - cutoff / 2) / (cutoff / 2)
    out[band] = np.cos(0.5 * np.pi * _meyer_ramp(s))
    return out


def _angular_window(theta: np.ndarray, center: float, half_width: float) -> np.ndarray:
    d = np.mod(theta - center + np.pi, 2.0 * np.pi) - np.pi
    s = np.abs(d) / half_width
    out = np.zeros(theta.shape)
    inside = s < 1.0
    out[inside] = np.cos(0.5 * np.pi * _meyer_ramp(s[inside]))
    return out


def default_nscales(rows: int, cols: int) -> int:
    return max(2, int(np.ceil(np.log2(min(rows, cols)))) - 3)


def _nangles_per_scale(nscales: int, nangles_coarse: int) -> tuple[int, ...]:
    # scale 0 coarse and the finest scale are isotropic; in between the wedge
    # count doubles every other scale: 16, 32, 32, 64, ...
    counts = [1]
    for j in range(1, nscales - 1):
        counts.append(nangles_coarse * 2 ** int(np.ceil((j - 1) / 2)))
    counts.append(1)
    return tuple(counts)


@dataclass(frozen=True)
class TileWindow:
    """One frequency window and the grid rectangle its support wraps into."""

    scale: int
    angle: int
    row0: int
    col0: int
    window: np.ndarray = field(repr=False)
    radial_bounds: tuple[float, float] = (0.0, 0.0)
    angular_bounds: tuple[float, float] | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.window.shape


class CurveletGeometry:
    """Precomputed window set for a fixed grid shape; shared read-only."""

    def __init__(self, rows: int, cols: int, nscales: int | None = None,
                 nangles_coarse: int = 16):
        if nscales is None:
            nscales = default_nscales(rows, cols)
        if nscales < 2:
            raise ValueError(f"nscales must be >= 2, got {nscales}")
        if nangles_coarse < 8 or nangles_coarse % 4:
            raise ValueError(f"nangles_coarse must be a multiple of 4 >= 8, got {nangles_coarse}")
        if min(rows, cols) < 2**nscales:
            raise ValueError(
                f"geometry infeasible: {rows}x{cols} grid is too small for {nscales} scales"
            )
        self.rows = int(rows)
        self.cols = int(cols)
        self.nscales = int(nscales)
        self.nangles_coarse = int(nangles_coarse)
        self.nangles_per_scale = _nangles_per_scale(self.nscales, self.nangles_coarse)
        self._tiles = self._build()
        self._by_index = {(t.scale, t.angle): t for t in self._tiles}

    def _rho_theta(self, rs: slice, cs: slice) -> tuple[np.ndarray, np.ndarray]:
        u = np.arange(rs.start, rs.stop) - self.rows // 2
        v = np.arange(cs.start, cs.stop) - self.cols // 2
        t1 = 2.0 * u[:, None] / self.rows
        t2 = 2.0 * v[None, :] / self.cols
        rho = np.maximum(np.abs(t1), np.abs(t2))
        theta = np.arctan2(np.broadcast_to(t2, rho.shape), np.broadcast_to(t1, rho.shape))
        return rho, theta

    def _scale_box(self, j: int) -> tuple[slice, slice]:
        """Centered box containing the scale-j support (cutoff rho_j)."""
        rho_j = 2.0 ** -(self.nscales - 1 - j)
        h = 2 * int(np.ceil(self.rows * rho_j / 2))
        w = 2 * int(np.ceil(self.cols * rho_j / 2))
        return centered_slices(self.rows, self.cols, (h, w))

    def _build(self) -> tuple[TileWindow, ...]:
        rho_of = lambda j: 2.0 ** -(self.nscales - 1 - j)
        tiles: list[TileWindow] = []

        # Coarse isotropic window W0 on its own centered box.
        rs, cs = self._scale_box(0)
        rho, _ = self._rho_theta(rs, cs)
        w0 = _radial_lowpass(rho, rho_of(0))
        tiles.append(TileWindow(0, 0, rs.start, cs.start, w0, (0.0, rho_of(0))))

        # Directional coronae.
        for j in range(1, self.nscales - 1):
            rs, cs = self._scale_box(j)
            rho, theta = self._rho_theta(rs, cs)
            lo_inner = _radial_lowpass(rho, rho_of(j - 1))
            lo_outer = _radial_lowpass(rho, rho_of(j))
            corona = np.sqrt(np.maximum(lo_outer**2 - lo_inner**2, 0.0))
            nang = self.nangles_per_scale[j]
            step = 2.0 * np.pi / nang
            for l in range(nang):
                center = -np.pi + (l + 0.5) * step
                wedge = corona * _angular_window(theta, center, step)
                tiles.append(self._crop(j, l, rs, cs, wedge,
                                        (rho_of(j - 1) / 2, rho_of(j)),
                                        (center - step, center + step)))

        # Finest isotropic band on the full grid.
        rs, cs = slice(0, self.rows), slice(0, self.cols)
        rho, _ = self._rho_theta(rs, cs)
        lo = _radial_lowpass(rho, rho_of(self.nscales - 2))
        band = np.sqrt(np.maximum(1.0 - lo**2, 0.0))
        tiles.append(TileWindow(self.nscales - 1, 0, 0, 0, band,
                                (rho_of(self.nscales - 2) / 2, 1.0)))
        return tuple(tiles)

    def _crop(self, j, l, rs, cs, wedge, rbounds, abounds) -> TileWindow:
        nz_r, nz_c = np.nonzero(wedge)
        if nz_r.size == 0:
            raise ValueError(
                f"geometry infeasible: wedge (scale {j}, angle {l}) has empty support "
                f"on a {self.rows}x{self.cols} grid"
            )
        r0, r1 = nz_r.min(), nz_r.max() + 1
        c0, c1 = nz_c.min(), nz_c.max() + 1
        return TileWindow(j, l, rs.start + r0, cs.start + c0,
                          np.ascontiguousarray(wedge[r0:r1, c0:c1]), rbounds, abounds)

    @property
    def tiles(self) -> tuple[TileWindow, ...]:
        return self._tiles

    def tile(self, scale: int, angle: int) -> TileWindow:
        return self._by_index[(scale, angle)]

    @property
    def coeff_count(self) -> int:
        return sum(t.window.size for t in self._tiles)

    def tile_shapes(self) -> tuple[tuple[int, int], ...]:
        return tuple(t.shape for t in self._tiles)

    def window_power(self) -> np.ndarray:
        """Sum of squared windows over the grid; == 1 everywhere for a tight frame."""
        total = np.zeros((self.rows, self.cols))
        for t in self._tiles:
            total[t.row0 : t.row0 + t.shape[0], t.col0 : t.col0 + t.shape[1]] += t.window**2
        return total

    def matches(self, pyr: "CurveletPyramid") -> bool:
        return (pyr.rows, pyr.cols) == (self.rows, self.cols) and pyr.tile_shapes == self.tile_shapes()


@dataclass(frozen=True)
class CurveletPyramid:
    """Complex coefficient tiles in (scale, angle) order; redundant (count > rows*cols)."""

    rows: int
    cols: int
    tiles: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def tile_shapes(self) -> tuple[tuple[int, int], ...]:
        return tuple(t.shape for t in self.tiles)

    @property
    def coeff_count(self) -> int:
        return sum(t.size for t in self.tiles)

    def flatten(self) -> np.ndarray:
        return np.concatenate([t.ravel() for t in self.tiles])


def unflatten_curvelet(vec: np.ndarray, geom: CurveletGeometry) -> CurveletPyramid:
    tiles = []
    pos = 0
    for t in geom.tiles:
        n = t.window.size
        tiles.append(vec[pos : pos + n].reshape(t.shape))
        pos += n
    if pos != vec.size:
        raise ValueError(f"coefficient vector length {vec.size} != geometry count {pos}")
    return CurveletPyramid(geom.rows, geom.cols, tuple(tiles))


def _cdft2(x: np.ndarray) -> np.ndarray:
    return fftshift(fft2(ifftshift(x), norm="ortho"))


def _cidft2(x: np.ndarray) -> np.ndarray:
    return fftshift(ifft2(ifftshift(x), norm="ortho"))


def fdct_forward(img: ImageGrid, geom: CurveletGeometry) -> CurveletPyramid:
    """Window the centered spectrum and inverse-DFT each wrapped wedge."""
    if img.domain != SPACE:
        raise ValueError("fdct_forward expects a space-domain image")
    if img.shape != (geom.rows, geom.cols):
        raise ValueError(f"image shape {img.shape} != geometry {(geom.rows, geom.cols)}")
    spectrum = _cdft2(img.data)
    tiles = []
    for t in geom.tiles:
        sub = spectrum[t.row0 : t.row0 + t.shape[0], t.col0 : t.col0 + t.shape[1]]
        tiles.append(_cidft2(sub * t.window))
    return CurveletPyramid(geom.rows, geom.cols, tuple(tiles))


def fdct_adjoint(pyr: CurveletPyramid, geom: CurveletGeometry) -> ImageGrid:
    """Adjoint of fdct_forward; exact inverse because the frame is Parseval."""
    if not geom.matches(pyr):
        raise ValueError("pyramid does not match this geometry")
    spectrum = np.zeros((geom.rows, geom.cols), dtype=np.complex128)
    for t, data in zip(geom.tiles, pyr.tiles):
        sub = _cdft2(data)
        spectrum[t.row0 : t.row0 + t.shape[0], t.col0 : t.col0 + t.shape[1]] += t.window * sub
    return ImageGrid(_cidft2(spectrum), SPACE)


def curvelet_lowfreq_extent(geom: CurveletGeometry) -> tuple[int, int]:
    """Frequency-support extent (height, width) of the coarse window W0."""
    t = geom.tile(0, 0)
    return t.shape
