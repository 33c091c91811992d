"""
Explicit initial data: the bump, frequency-shifted packets, the series datum
for the quadratic models and the power-law datum for the cubic model.

Every field here is built from its spectrum.  Sampling fhat on the grid
frequencies and inverting gives, by Poisson summation, the L-periodisation
of the continuum function, so spectral supports are exact and the only
discretisation error is the tail that wraps around the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DomainError,
    OutOfBandError,
    PreconditionError,
    ResolutionError,
    TailEnergyError,
)
from .littlewood_paley import smooth_step
from .spectral_core import Grid, RealField, dealias_mask, field_from_half_spectrum

__all__ = [
    "PACKET_FACTOR",
    "hat_profile",
    "BumpProfile",
    "PacketSpec",
    "CHDataSpec",
    "NovikovDataSpec",
    "make_bump",
    "make_packet",
    "make_ch_data",
    "make_ch_terms",
    "make_novikov_data",
    "novikov_spectrum",
    "c_sigma",
    "tail_energy_fraction",
]

PACKET_FACTOR = 17.0 / 12.0
TAIL_MARGIN = 10.0
TAIL_TOL = 1e-10
QUADRATIC_CUTOFF = 2.0 / 3.0


def hat_profile(xi):
    """Even bump: 1 on |xi| <= 1/4, 0 on |xi| >= 1/2, smooth step between."""
    r = np.abs(np.asarray(xi, dtype=float))
    return smooth_step((r - 0.25) / 0.25)


def tail_energy_fraction(field: RealField, margin: float = TAIL_MARGIN) -> float:
    """Share of sum |f|^2 dx carried by |x| > L/2 - margin."""
    s = field.samples
    total = float(np.dot(s, s))
    if total == 0.0:
        return 0.0
    outside = np.abs(field.grid.x) > 0.5 * field.grid.length - margin
    return float(np.dot(s[outside], s[outside]) / total)


@dataclass(frozen=True, eq=False)
class BumpProfile:
    field: RealField
    tail_fraction: float

    @property
    def grid(self) -> Grid:
        return self.field.grid

    @staticmethod
    def hat_profile(xi):
        return hat_profile(xi)


def make_bump(grid: Grid) -> BumpProfile:
    """phi = inverse transform of `hat_profile`, real, even, positive at 0."""
    if grid.dxi > 1.0 / 64.0:
        raise ResolutionError(
            f"bump needs frequency spacing <= 1/64, grid has {grid.dxi:.4g} (raise the box length)"
        )
    if grid.xi_max <= 0.5:
        raise ResolutionError("grid does not resolve |xi| <= 1/2")
    return _make_bump(grid)


@lru_cache(maxsize=4)
def _make_bump(grid: Grid) -> BumpProfile:
    field = field_from_half_spectrum(grid, hat_profile(grid.rxi) / grid.length)
    tail = tail_energy_fraction(field)
    if tail > TAIL_TOL:
        raise TailEnergyError(f"bump tail energy {tail:.2e} exceeds {TAIL_TOL:g}; enlarge the box")
    return BumpProfile(field, tail)


@dataclass(frozen=True)
class PacketSpec:
    """phi(x) cos(17/12 * (2^{kn} + sign 2^{ki}) x); `i=None` drops the shift."""

    k: int
    n: int
    i: int | None = None
    sign: int = 1

    def __post_init__(self):
        if self.k < 1 or self.n < 0:
            raise PreconditionError(f"packet needs k >= 1 and n >= 0, got k={self.k}, n={self.n}")
        if self.i is not None and not 0 <= self.i <= self.n - 1:
            raise PreconditionError(f"packet shift index must satisfy 0 <= i <= n-1, got i={self.i}, n={self.n}")
        if self.sign not in (1, -1):
            raise PreconditionError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def block(self) -> int:
        return self.k * self.n

    @property
    def frequency(self) -> float:
        omega = 2.0 ** (self.k * self.n)
        if self.i is not None:
            omega += self.sign * 2.0 ** (self.k * self.i)
        return PACKET_FACTOR * omega


def _shifted_hat(grid: Grid, omega: float) -> np.ndarray:
    xi = grid.rxi
    return 0.5 * (hat_profile(xi - omega) + hat_profile(xi + omega)) / grid.length


def make_packet(spec: PacketSpec, bump: BumpProfile, cutoff: float = QUADRATIC_CUTOFF) -> RealField:
    """Sampled packet; its spectrum is the bump shifted to +-frequency."""
    grid = bump.grid
    omega = spec.frequency
    if omega + 0.5 > cutoff * grid.xi_max:
        raise OutOfBandError(
            f"packet frequency {omega:.1f} exceeds the dealias cutoff {cutoff * grid.xi_max:.1f}"
        )
    return field_from_half_spectrum(grid, _shifted_hat(grid, omega))


@dataclass(frozen=True)
class CHDataSpec:
    """u0 = sum_{n=0}^{n_max} 2^{-kn sigma} f^k_n."""

    k: int = 5
    sigma: float = 4.0
    n_max: int = 2
    p: float = 2.0

    def __post_init__(self):
        if self.k < 1 or self.n_max < 0:
            raise PreconditionError(f"need k >= 1 and n_max >= 0, got k={self.k}, n_max={self.n_max}")
        floor = 2.0 + max(1.5, 1.0 + (0.0 if math.isinf(self.p) else 1.0 / self.p))
        if not self.sigma > floor:
            raise DomainError(f"sigma must exceed {floor:g} for p={self.p}, got {self.sigma}")

    def weight(self, n: int) -> float:
        return 2.0 ** (-self.k * n * self.sigma)


def make_ch_terms(spec: CHDataSpec, bump: BumpProfile) -> list[RealField]:
    """Unweighted packets f^k_0 .. f^k_{n_max}."""
    return [make_packet(PacketSpec(spec.k, n), bump) for n in range(spec.n_max + 1)]


def make_ch_data(spec: CHDataSpec, bump: BumpProfile) -> RealField:
    grid = bump.grid
    top = PacketSpec(spec.k, spec.n_max).frequency
    if top + 0.5 > QUADRATIC_CUTOFF * grid.xi_max:
        raise OutOfBandError(
            f"term n={spec.n_max} sits at {top:.1f}, above the dealias cutoff "
            f"{QUADRATIC_CUTOFF * grid.xi_max:.1f}; raise num_points"
        )
    spectrum = np.zeros(grid.rxi.size)
    for n in range(spec.n_max + 1):
        spectrum += spec.weight(n) * _shifted_hat(grid, PacketSpec(spec.k, n).frequency)
    return field_from_half_spectrum(grid, spectrum)


@dataclass(frozen=True)
class NovikovDataSpec:
    """uhat0(xi) = (1 + |xi|)^{-sigma - 1/2}."""

    sigma: float = 4.0

    def __post_init__(self):
        if not self.sigma > 3.5:
            raise DomainError(f"sigma must exceed 7/2, got {self.sigma}")


def novikov_spectrum(sigma: float, xi):
    return (1.0 + np.abs(np.asarray(xi, dtype=float))) ** (-sigma - 0.5)


def make_novikov_data(spec: NovikovDataSpec, grid: Grid, band: float | None = None) -> RealField:
    """Inverse transform of the sampled power law.

    With `band` set, only modes strictly below band * xi_max are kept (the
    same rule the solver's dealiasing applies), so the datum fits that
    budget exactly.
    """
    spectrum = novikov_spectrum(spec.sigma, grid.rxi) / grid.length
    if band is not None:
        spectrum = np.where(dealias_mask(grid.rxi, grid, band, strict=True), spectrum, 0.0)
    return field_from_half_spectrum(grid, spectrum)


def c_sigma(sigma: float) -> float:
    """4 (1 - 2^{1/2 - sigma}) / (2 sigma - 1), the integral of (1+|eta|)^{-sigma-1/2} over |eta| <= 1."""
    if not sigma > 0.5:
        raise DomainError(f"c(sigma) needs sigma > 1/2, got {sigma}")
    return 4.0 * (1.0 - 2.0 ** (0.5 - sigma)) / (2.0 * sigma - 1.0)
