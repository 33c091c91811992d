"""
Nonlocal right-hand sides of the Camassa-Holm, b-family and Novikov
equations in transport form.

    CH / b-family:  u_t = -u u_x - d_x (1 - d_x^2)^{-1} (b/2 u^2 + (3-b)/2 u_x^2)
    Novikov:        u_t = -u^2 u_x - (1 - d_x^2)^{-1} (1/2 u_x^3 + d_x(3/2 u u_x^2 + u^3))

Products are formed pointwise and dealiased (2/3 for quadratic, 1/2 for
cubic nonlinearities); derivatives use the i*xi multiplier.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, ResolutionWarning
from .spectral_core import Grid, RealField, half_spectrum_energy, irfft, rfft, spectral_ops

__all__ = [
    "ModelKind",
    "CAMASSA_HOLM",
    "NOVIKOV",
    "b_family",
    "degasperis_procesi",
    "source_P",
    "source_b",
    "source_Q",
    "tendency",
    "tendency_array",
    "check_band",
    "h1_energy",
    "momentum_mean",
]

QUADRATIC = 2.0 / 3.0
CUBIC = 0.5
BAND_TOL = 1e-6


@dataclass(frozen=True)
class ModelKind:
    """One of the three evolution equations.

    `name` is "camassa-holm", "b-family" or "novikov"; `b` is only read for
    the b-family.  Camassa-Holm is the b = 2 member and runs through the
    same code path.
    """

    name: str
    b: float = 2.0

    def __post_init__(self):
        if self.name not in ("camassa-holm", "b-family", "novikov"):
            raise InvalidParameterError(f"unknown model {self.name!r}")
        if not np.isfinite(self.b):
            raise InvalidParameterError(f"b must be finite, got {self.b}")
        if self.name == "camassa-holm" and self.b != 2.0:
            raise InvalidParameterError("Camassa-Holm is the b = 2 member; use b_family(b) otherwise")

    @property
    def is_cubic(self) -> bool:
        return self.name == "novikov"

    @property
    def dealias_fraction(self) -> float:
        return CUBIC if self.is_cubic else QUADRATIC

    @property
    def label(self) -> str:
        return f"b-family(b={self.b:g})" if self.name == "b-family" else self.name


CAMASSA_HOLM = ModelKind("camassa-holm")
NOVIKOV = ModelKind("novikov")


def b_family(b: float) -> ModelKind:
    return ModelKind("b-family", float(b))


def degasperis_procesi() -> ModelKind:
    return b_family(3.0)


def check_band(u: RealField, fraction: float, tol: float = BAND_TOL) -> float:
    """Warn when the share of energy above the cutoff exceeds `tol`.

    Returns that share.
    """
    g = u.grid
    c = rfft(u.samples)
    total = half_spectrum_energy(g, c)
    if total == 0.0:
        return 0.0
    above = half_spectrum_energy(g, np.where(spectral_ops(g).mask(fraction), 0.0, c))
    share = above / total
    if share > tol:
        warnings.warn(
            f"{share:.2e} of the energy lies above the dealias cutoff {fraction:.3g} * xi_max",
            ResolutionWarning,
            stacklevel=3,
        )
    return share


def _quadratic_source(grid: Grid, u, ux, b: float, fraction: float):
    """Half spectrum of -d_x (1-d_x^2)^{-1} (b/2 u^2 + (3-b)/2 u_x^2)."""
    ops = spectral_ops(grid)
    mask = ops.mask(fraction)
    prod = rfft(0.5 * b * u * u + 0.5 * (3.0 - b) * ux * ux)
    return np.where(mask, -ops.ik * ops.helm * prod, 0.0)


def _cubic_source(grid: Grid, u, ux, fraction: float):
    """Half spectrum of -(1-d_x^2)^{-1} (1/2 u_x^3 + d_x(3/2 u u_x^2 + u^3))."""
    ops = spectral_ops(grid)
    mask = ops.mask(fraction)
    a = rfft(0.5 * ux**3)
    c = rfft(1.5 * u * ux * ux + u**3)
    return np.where(mask, -ops.helm * (a + ops.ik * c), 0.0)


def _state(grid: Grid, samples: np.ndarray):
    ops = spectral_ops(grid)
    uh = rfft(samples)
    ux = irfft(ops.ik * uh, grid.num_points)
    return uh, ux


def tendency_array(grid: Grid, samples: np.ndarray, model: ModelKind, fraction: float | None = None) -> np.ndarray:
    """du/dt as a sample array; the inner loop of the solver."""
    ops = spectral_ops(grid)
    fraction = model.dealias_fraction if fraction is None else fraction
    mask = ops.mask(fraction)
    u = samples
    _, ux = _state(grid, u)
    if model.is_cubic:
        rhs = _cubic_source(grid, u, ux, fraction) - np.where(mask, rfft(u * u * ux), 0.0)
    else:
        rhs = _quadratic_source(grid, u, ux, model.b, fraction) - np.where(mask, rfft(u * ux), 0.0)
    return irfft(rhs, grid.num_points)


def source_b(u: RealField, b: float, fraction: float = QUADRATIC) -> RealField:
    check_band(u, fraction)
    g = u.grid
    _, ux = _state(g, u.samples)
    return RealField(g, irfft(_quadratic_source(g, u.samples, ux, b, fraction), g.num_points))


def source_P(u: RealField, fraction: float = QUADRATIC) -> RealField:
    """P(u) = -d_x (1 - d_x^2)^{-1} (u^2 + u_x^2 / 2)."""
    return source_b(u, 2.0, fraction)


def source_Q(u: RealField, fraction: float = CUBIC) -> RealField:
    check_band(u, fraction)
    g = u.grid
    _, ux = _state(g, u.samples)
    return RealField(g, irfft(_cubic_source(g, u.samples, ux, fraction), g.num_points))


def tendency(u: RealField, model: ModelKind) -> RealField:
    check_band(u, model.dealias_fraction)
    return RealField(u.grid, tendency_array(u.grid, u.samples, model))


def h1_energy(grid: Grid, samples: np.ndarray) -> float:
    """sum (u^2 + u_x^2) dx."""
    _, ux = _state(grid, samples)
    return float((np.dot(samples, samples) + np.dot(ux, ux)) * grid.dx)


def momentum_mean(grid: Grid, samples: np.ndarray) -> float:
    """sum (u - u_xx) dx."""
    ops = spectral_ops(grid)
    uxx = irfft(ops.ik**2 * rfft(samples), grid.num_points)
    return float(np.sum(samples - uxx) * grid.dx)
