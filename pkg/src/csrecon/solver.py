"""FISTA with backtracking line search for the weighted-l1 Lagrangian.

Minimizes (1/2) ||A y - b||^2 + sum_i lambda_i |y_i| over complex y. The step
starts at 1.0 (valid because the measurement operator has norm <= 1), is
halved until the quadratic upper bound holds, and grows 1.25x per iteration.
The solver runs a fixed iteration count and reports the best iterate seen.
Iterative reweighting alternates solves with lambda_i <- c / (|y_i| + eps).
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dictionary import Dictionary, WeightVector
from .grid import ImageGrid

INITIAL_STEP = 1.0
BACKTRACK = 0.5
STEP_GROWTH = 1.25
LAMBDA_FLOOR_FRAC = 1e-6
REWEIGHT_EPS_FRAC = 0.1


class NumericalError(RuntimeError):
    """Raised when the objective stops being finite (an operator bug, usually)."""


@dataclass
class LassoProblem:
    """One weighted-LASSO instance over flattened dictionary coefficients."""

    forward: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    data: np.ndarray
    lam: np.ndarray
    initial: np.ndarray
    max_iters: int = 100

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.complex128).ravel()
        self.lam = np.asarray(self.lam, dtype=np.float64).ravel()
        self.initial = np.asarray(self.initial, dtype=np.complex128).ravel()
        if self.lam.size != self.initial.size:
            raise ValueError("lambda and initial iterate lengths differ")
        if self.lam.size and self.lam.min() < 0:
            raise ValueError("lambda must be nonnegative")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")

    def objective(self, y: np.ndarray) -> float:
        r = self.forward(y) - self.data
        return 0.5 * float(np.vdot(r, r).real) + float(np.sum(self.lam * np.abs(y)))

    def check_adjoint(self, tol: float = 1e-10, seed: int = 0) -> float:
        """Dot-product test; raises if forward/adjoint disagree beyond tol."""
        rng = np.random.default_rng(seed)
        y = rng.standard_normal(self.initial.size) + 1j * rng.standard_normal(self.initial.size)
        v = rng.standard_normal(self.data.size) + 1j * rng.standard_normal(self.data.size)
        lhs = np.vdot(v, self.forward(y))
        rhs = np.vdot(self.adjoint(v), y)
        err = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        if err > tol:
            raise ValueError(f"forward/adjoint dot-product test failed: {err:.3e} > {tol:.0e}")
        return err


@dataclass
class SolveReport:
    """Per-iteration trace of one FISTA run."""

    objectives: list[float] = field(default_factory=list)
    steps: list[float] = field(default_factory=list)
    slacks: list[float] = field(default_factory=list)
    best_objective: float = np.inf
    best_iteration: int = -1
    wall_time: float = 0.0


def soft_threshold(coeffs: np.ndarray, thresholds: np.ndarray | float) -> np.ndarray:
    """Complex magnitude shrinkage: y <- y * max(0, 1 - t / |y|); zero stays zero."""
    t = np.asarray(thresholds, dtype=np.float64)
    if t.size and t.min() < 0:
        raise ValueError("thresholds must be nonnegative")
    mag = np.abs(coeffs)
    scale = np.zeros_like(mag)
    np.divide(np.maximum(mag - t, 0.0), mag, out=scale, where=mag > 0)
    return coeffs * scale


def fista_line_search(prob: LassoProblem) -> tuple[np.ndarray, SolveReport]:
    """Run exactly max_iters accelerated proximal-gradient steps; return the best iterate."""
    t_start = time.perf_counter()
    report = SolveReport()
    x_prev = prob.initial.copy()
    z = x_prev.copy()
    t_mom = 1.0
    step = INITIAL_STEP
    best = x_prev.copy()
    best_obj = prob.objective(x_prev)
    report.best_objective = best_obj
    if not np.isfinite(best_obj):
        raise NumericalError("objective is not finite at the initial iterate")

    for it in range(prob.max_iters):
        step *= STEP_GROWTH
        r = prob.forward(z) - prob.data
        f_z = 0.5 * float(np.vdot(r, r).real)
        grad = prob.adjoint(r)
        while True:
            cand = soft_threshold(z - step * grad, step * prob.lam)
            diff = cand - z
            rc = prob.forward(cand) - prob.data
            f_cand = 0.5 * float(np.vdot(rc, rc).real)
            bound = f_z + float(np.vdot(grad, diff).real) + float(np.vdot(diff, diff).real) / (2 * step)
            if f_cand <= bound + 1e-12 * max(1.0, abs(bound)):
                break
            step *= BACKTRACK
            if step < 1e-20:
                raise NumericalError("line search collapsed; operator likely not bounded")
        obj = f_cand + float(np.sum(prob.lam * np.abs(cand)))
        if not np.isfinite(obj):
            raise NumericalError(f"objective became non-finite at iteration {it}")
        report.objectives.append(obj)
        report.steps.append(step)
        report.slacks.append(bound - f_cand)
        if obj < best_obj:
            best_obj = obj
            best = cand.copy()
            report.best_objective = obj
            report.best_iteration = it
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t_mom**2))
        z = cand + ((t_mom - 1.0) / t_next) * (cand - x_prev)
        x_prev = cand
        t_mom = t_next

    report.wall_time = time.perf_counter() - t_start
    return best, report


def initial_lambda(zero_filled: ImageGrid, dic: Dictionary) -> WeightVector:
    """Coefficient magnitudes of the zero-filled reconstruction, floored at 1e-6 * max."""
    mags = np.abs(dic.forward(zero_filled).flatten())
    floor = LAMBDA_FLOOR_FRAC * (mags.max() if mags.size else 0.0)
    return WeightVector(np.maximum(mags, floor))


def reweight_lambda(lam: np.ndarray, y: np.ndarray, support: np.ndarray) -> np.ndarray:
    """lambda_i <- c / (|y_i| + eps) on the support, preserving mean(lambda | support)."""
    mag = np.abs(y)
    eps = REWEIGHT_EPS_FRAC * float(np.std(mag))
    if eps <= 0 or not support.any():
        return lam.copy()
    raw = 1.0 / (mag + eps)
    c = float(np.mean(lam[support])) / float(np.mean(raw[support]))
    out = np.zeros_like(lam)
    out[support] = c * raw[support]
    return out


def reweighted_solve(prob: LassoProblem, n_reweights: int = 5) -> tuple[np.ndarray, list[SolveReport]]:
    """Alternate weight updates and solves; zero weights stay zero throughout.

    Each round updates lambda from the current iterate (the first round from
    the problem's initial iterate, i.e. the zero-filled coefficients) and then
    runs one FISTA solve. n_reweights = 0 degenerates to a single plain solve.
    """
    if n_reweights < 0:
        raise ValueError("n_reweights must be nonnegative")
    if n_reweights == 0:
        y, report = fista_line_search(prob)
        return y, [report]
    support = prob.lam > 0
    y = prob.initial
    reports = []
    for _ in range(n_reweights):
        prob.lam = reweight_lambda(prob.lam, y, support)
        prob.initial = y
        y, report = fista_line_search(prob)
        reports.append(report)
    return y, reports


def write_trace_csv(reports: list[SolveReport], path) -> None:
    """Objective traces as CSV rows: round, iteration, objective, step."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "iteration", "objective", "step"])
        for rnd, rep in enumerate(reports):
            for it, (obj, st) in enumerate(zip(rep.objectives, rep.steps)):
                writer.writerow([rnd, it, repr(obj), repr(st)])
