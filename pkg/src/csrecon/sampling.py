"""Variable-density k-space sampling masks.

Two generators: a separable Laplacian density sampled without replacement
(Gumbel top-k, the weighted-reservoir scheme), and a variable-density Poisson
disc whose exclusion radius grows linearly with distance from the spectrum
center. Both are deterministic per seed. `with_fsr` forces a fully-sampled
center rectangle while conserving the total sample count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import SampleMask, centered_slices

LAPLACIAN = "laplacian"
VD_POISSON = "vd_poisson"

_BRIDSON_TRIES = 30


@dataclass(frozen=True)
class SamplerConfig:
    kind: str = LAPLACIAN
    sigma_frac: float = 0.3       # Laplace std; fraction of side if < 1, else pixels
    poisson_param: float = 0.3    # radius growth scale as a fraction of side
    n_samples: int = 0
    seed: int = 0
    fsr: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in (LAPLACIAN, VD_POISSON):
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be positive, got {self.n_samples}")
        if self.fsr is not None:
            object.__setattr__(self, "fsr", (int(self.fsr[0]), int(self.fsr[1])))
            if self.fsr[0] * self.fsr[1] > self.n_samples:
                raise ValueError(
                    f"FSR {self.fsr} needs {self.fsr[0] * self.fsr[1]} samples "
                    f"but the budget is {self.n_samples}"
                )


def _laplace_scale(sigma: float, side: int) -> float:
    """Laplace scale b from the requested std (fractional if < 1, else pixels)."""
    std = sigma * side if sigma < 1.0 else sigma
    if std <= 0:
        raise ValueError(f"sampler std must be positive, got {std}")
    return std / np.sqrt(2.0)

def laplace_log_weights(rows: int, cols: int, sigma_frac: float) -> np.ndarray:
    """Log of the separable Laplacian density on the centered grid."""
    b_r = _laplace_scale(sigma_frac, rows)
    b_c = _laplace_scale(sigma_frac, cols)
    u = np.abs(np.arange(rows) - rows // 2)
    v = np.abs(np.arange(cols) - cols // 2)
    return -(u[:, None] / b_r) - (v[None, :] / b_c)


def laplacian_mask(rows: int, cols: int, cfg: SamplerConfig) -> SampleMask:
    """Exactly n_samples distinct cells drawn from the separable Laplacian density."""
    n = cfg.n_samples
    if n > rows * cols:
        raise ValueError(f"cannot draw {n} samples from a {rows}x{cols} grid")
    logw = laplace_log_weights(rows, cols, cfg.sigma_frac).ravel()
    rng = np.random.default_rng(cfg.seed)
    keys = logw + rng.gumbel(size=rows * cols)
    chosen = np.argpartition(keys, rows * cols - n)[rows * cols - n :]
    flags = np.zeros(rows * cols, dtype=bool)
    flags[chosen] = True
    return SampleMask(flags.reshape(rows, cols))


def poisson_radius(rows: int, cols: int, base: float, param: float) -> np.ndarray:
    """Local exclusion radius: base * (1 + d / (param * side))."""
    side = min(rows, cols)
    u = np.arange(rows) - rows // 2
    v = np.arange(cols) - cols // 2
    d = np.hypot(u[:, None], v[None, :])
    return base * (1.0 + d / (param * side))


def _bridson(rows: int, cols: int, radius: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Variable-radius Bridson dart throwing on the integer grid.

    A candidate c is accepted when every existing point p satisfies
    dist(c, p) >= min(r(c), r(p)).
    """
    occupied = np.zeros((rows, cols), dtype=bool)
    points: list[tuple[int, int]] = []

    def conflicts(r, c):
        rc = radius[r, c]
        w = int(np.ceil(rc))
        r0, r1 = max(0, r - w), min(rows, r + w + 1)
        c0, c1 = max(0, c - w), min(cols, c + w + 1)
        rr, cc = np.nonzero(occupied[r0:r1, c0:c1])
        if rr.size == 0:
            return False
        rr = rr + r0
        cc = cc + c0
        dist = np.hypot(rr - r, cc - c)
        return bool(np.any(dist < np.minimum(rc, radius[rr, cc])))

    def push(r, c):
        occupied[r, c] = True
        points.append((r, c))
        active.append((r, c))

    active: list[tuple[int, int]] = []
    push(rows // 2, cols // 2)
    while active:
        i = rng.integers(len(active))
        r, c = active[i]
        rc = radius[r, c]
        for _ in range(_BRIDSON_TRIES):
            rad = rc * (1.0 + rng.random())
            phi = 2.0 * np.pi * rng.random()
            nr = int(round(r + rad * np.cos(phi)))
            nc = int(round(c + rad * np.sin(phi)))
            if not (0 <= nr < rows and 0 <= nc < cols) or occupied[nr, nc]:
                continue
            if not conflicts(nr, nc):
                push(nr, nc)
                break
        else:
            active[i] = active[-1]
            active.pop()
    return occupied


def vd_poisson_mask(rows: int, cols: int, cfg: SamplerConfig) -> SampleMask:
    """Variable-density Poisson-disc mask; count within 1% of the request.

    The base radius is bisected until the achieved count lands in the
    tolerance band; each trial reuses the seed so the result is deterministic.
    """
    n = cfg.n_samples
    if n > rows * cols:
        raise ValueError(f"cannot place {n} samples on a {rows}x{cols} grid")
    lo, hi = 0.05, float(min(rows, cols))
    flags = None
    for _ in range(40):
        base = np.sqrt(lo * hi)
        radius = poisson_radius(rows, cols, base, cfg.poisson_param)
        trial = _bridson(rows, cols, radius, np.random.default_rng(cfg.seed))
        count = int(trial.sum())
        if abs(count - n) <= max(1, round(0.01 * n)):
            flags = trial
            break
        if count > n:
            lo = base
        else:
            hi = base
        if hi - lo < 1e-9:
            break
    if flags is None:
        raise ValueError(
            f"could not reach {n} Poisson-disc samples on a {rows}x{cols} grid "
            f"(closest count {count})"
        )
    return SampleMask(flags)


def with_fsr(mask: SampleMask, fsr: tuple[int, int], n_total: int, seed: int = 0) -> SampleMask:
    """Force the centered FSR rectangle on, thinning outside samples to keep n_total."""
    h, w = int(fsr[0]), int(fsr[1])
    if h * w > n_total:
        raise ValueError(f"FSR {fsr} alone exceeds the sample budget {n_total}")
    flags = np.array(mask.flags)
    sl = centered_slices(mask.rows, mask.cols, (h, w))
    fsr_cells = np.zeros(mask.shape, dtype=bool)
    fsr_cells[sl] = True
    flags[sl] = True
    excess = int(flags.sum()) - n_total
    if excess < 0:
        raise ValueError(
            f"mask has too few samples ({int(flags.sum())}) to conserve n_total={n_total}"
        )
    if excess > 0:
        outside = np.flatnonzero(flags.ravel() & ~fsr_cells.ravel())
        rng = np.random.default_rng([seed, h, w])
        drop = rng.choice(outside, size=excess, replace=False)
        flags.ravel()[drop] = False
    return SampleMask(flags, fsr=(h, w))


def generate_mask(rows: int, cols: int, cfg: SamplerConfig) -> SampleMask:
    """Dispatch on cfg.kind and apply the FSR if configured."""
    if cfg.kind == LAPLACIAN:
        mask = laplacian_mask(rows, cols, cfg)
    else:
        mask = vd_poisson_mask(rows, cols, cfg)
    if cfg.fsr is not None:
        mask = with_fsr(mask, cfg.fsr, cfg.n_samples, seed=cfg.seed)
    return mask
