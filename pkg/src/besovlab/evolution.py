"""
Explicit RK4 time stepping of the transport-form models.

The integrator carries the displacement d(t) = u(t) - u0 as its state and
evaluates the tendency at u0 + d.  Norms such as ||S_t(u0) - u0||_{B^sigma}
weight the top block by 2^{sigma j_max} ~ 1e13, so forming S_t(u0) - u0 by
subtraction would drown the signal in rounding noise; accumulating the RK
increments keeps it clean.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    BlowUpError,
    CFLViolationError,
    InvalidParameterError,
    MaxStepsExceededError,
    PreconditionError,
)
from .pde_models import ModelKind, check_band, h1_energy, momentum_mean, tendency_array
from .spectral_core import Grid, RealField

__all__ = [
    "EvolutionConfig",
    "TrajectorySample",
    "Solution",
    "advective_speed",
    "step_rk4",
    "evolve",
    "solve",
    "linear_predictor",
    "remainder",
    "displacement",
    "diagnostics",
    "write_trajectory_csv",
]


@dataclass(frozen=True)
class EvolutionConfig:
    """Time-stepping policy.

    Attributes:
        dt: fixed step, or None for the CFL policy dt = cfl * dx / speed.
        cfl: safety factor of the CFL policy, in (0, 1].
        t_end: largest time `solve` accepts.
        max_steps: step-count guard.
        growth_guard: abort when max|u| exceeds this multiple of max|u0|.
        dealias: optional per-model overrides, keyed by model name.
    """

    dt: float | None = None
    cfl: float = 0.3
    t_end: float = 1.0
    max_steps: int = 100_000
    growth_guard: float = 10.0
    dealias: Mapping[str, float] | None = None

    def __post_init__(self):
        if self.t_end < 0:
            raise InvalidParameterError(f"t_end must be >= 0, got {self.t_end}")
        if not 0 < self.cfl <= 1:
            raise InvalidParameterError(f"cfl safety must lie in (0, 1], got {self.cfl}")
        if self.dt is not None and not self.dt > 0:
            raise InvalidParameterError(f"fixed dt must be positive, got {self.dt}")

    def fraction(self, model: ModelKind) -> float:
        if self.dealias and model.name in self.dealias:
            return float(self.dealias[model.name])
        return model.dealias_fraction


@dataclass
class TrajectorySample:
    t: float
    field: RealField
    diagnostics: dict


@dataclass
class Solution:
    """Result of `evolve`.

    `increment` is S_t(u0) - u0 accumulated step by step.
    """

    field: RealField
    increment: np.ndarray
    t: float
    steps: int
    samples: list = field(default_factory=list)


def advective_speed(model: ModelKind, samples: np.ndarray) -> float:
    peak = float(np.max(np.abs(samples)))
    return peak * peak if model.is_cubic else peak


def diagnostics(grid: Grid, samples: np.ndarray) -> dict:
    return {
        "h1": h1_energy(grid, samples),
        "mean_m": momentum_mean(grid, samples),
        "max_abs": float(np.max(np.abs(samples))),
    }


def _rk4_increment(grid, base, disp, dt, model, fraction, k1=None):
    f = lambda d: tendency_array(grid, base + d, model, fraction)  # noqa: E731
    if k1 is None:
        k1 = f(disp)
    k2 = f(disp + 0.5 * dt * k1)
    k3 = f(disp + 0.5 * dt * k2)
    k4 = f(disp + dt * k3)
    return (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_cfl(grid: Grid, model: ModelKind, samples: np.ndarray, dt: float, safety: float):
    number = abs(dt) * advective_speed(model, samples) / grid.dx
    if number > safety * (1 + 1e-12):
        raise CFLViolationError(f"CFL number {number:.3g} exceeds safety {safety:.3g} (dt={dt:.3g})")


def step_rk4(u: RealField, dt: float, model: ModelKind, safety: float = 1.0, fraction: float | None = None) -> RealField:
    """One classical RK4 step.  Negative dt steps backwards."""
    if dt == 0 or not np.isfinite(dt):
        raise InvalidParameterError(f"dt must be finite and nonzero, got {dt}")
    g = u.grid
    _check_cfl(g, model, u.samples, dt, safety)
    frac = model.dealias_fraction if fraction is None else fraction
    new = u.samples + _rk4_increment(g, u.samples, np.zeros_like(u.samples), dt, model, frac)
    if not np.all(np.isfinite(new)):
        raise BlowUpError("NaN produced during RK4 step", t_reached=0.0)
    return RealField(g, new)


def evolve(
    u0: RealField,
    t: float,
    model: ModelKind,
    cfg: EvolutionConfig | None = None,
    *,
    record_every: int | None = None,
) -> Solution:
    """Integrate from 0 to t; the last step is shortened to land on t."""
    cfg = cfg or EvolutionConfig()
    if t < 0:
        raise PreconditionError(f"t must be >= 0, got {t}")
    if t > cfg.t_end:
        raise PreconditionError(f"t = {t} exceeds the configured t_end = {cfg.t_end}")
    g = u0.grid
    frac = cfg.fraction(model)
    check_band(u0, frac)
    base = u0.samples
    disp = np.zeros_like(base)
    peak0 = float(np.max(np.abs(base)))
    samples = []
    if record_every:
        samples.append(TrajectorySample(0.0, u0, diagnostics(g, base)))

    t_now, steps = 0.0, 0
    while t_now < t:
        if steps >= cfg.max_steps:
            raise MaxStepsExceededError(f"max_steps = {cfg.max_steps} reached at t = {t_now:.6g}")
        u = base + disp
        speed = advective_speed(model, u)
        if cfg.dt is not None:
            dt = cfg.dt
            _check_cfl(g, model, u, min(dt, t - t_now), 1.0)
        else:
            dt = cfg.cfl * g.dx / speed if speed > 0 else math.inf
        # absorb a sliver of a step into the final one
        if t - t_now <= dt * (1.0 + 1e-9):
            dt = t - t_now
            t_next = t
        else:
            t_next = t_now + dt
        disp = disp + _rk4_increment(g, base, disp, dt, model, frac)
        steps += 1
        t_now = t_next
        if not np.all(np.isfinite(disp)):
            raise BlowUpError(f"NaN at t = {t_now:.6g}", t_reached=t_now)
        peak = float(np.max(np.abs(base + disp)))
        if peak0 > 0 and peak > cfg.growth_guard * peak0:
            raise BlowUpError(
                f"max|u| grew by {peak / peak0:.3g}x by t = {t_now:.6g}", t_reached=t_now
            )
        if record_every and (steps % record_every == 0 or t_now == t):
            cur = base + disp
            samples.append(TrajectorySample(t_now, RealField(g, cur), diagnostics(g, cur)))

    return Solution(RealField(g, base + disp), disp, t_now, steps, samples)


def solve(u0: RealField, t: float, model: ModelKind, cfg: EvolutionConfig | None = None) -> RealField:
    """Numerical S_t(u0)."""
    return evolve(u0, t, model, cfg).field


def displacement(u0: RealField, t: float, model: ModelKind, cfg: EvolutionConfig | None = None) -> RealField:
    """S_t(u0) - u0 without cancellation error."""
    return RealField(u0.grid, evolve(u0, t, model, cfg).increment)


def linear_predictor(u0: RealField, model: ModelKind) -> RealField:
    """v0 = tendency at u0 (first-order Taylor coefficient of the flow)."""
    check_band(u0, model.dealias_fraction)
    return RealField(u0.grid, tendency_array(u0.grid, u0.samples, model))


def remainder(u0: RealField, t: float, model: ModelKind, cfg: EvolutionConfig | None = None) -> RealField:
    """w(t) = S_t(u0) - u0 - t v0."""
    cfg = cfg or EvolutionConfig()
    sol = evolve(u0, t, model, cfg)
    v0 = tendency_array(u0.grid, u0.samples, model, cfg.fraction(model))
    return RealField(u0.grid, sol.increment - t * v0)


def write_trajectory_csv(samples, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "h1", "mean_m", "max_abs"])
        for s in samples:
            d = s.diagnostics
            w.writerow([repr(s.t), repr(d["h1"]), repr(d["mean_m"]), repr(d["max_abs"])])
