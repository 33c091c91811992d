"""
Periodic grid, real/spectral field pair, Fourier multipliers and quadrature.

The real line is replaced by the periodic box [-L/2, L/2) sampled at N
points.  Spectral coefficients follow the convention

    coeffs(m) = (1/N) * sum_i f(x_i) exp(-i xi_m x_i),   xi_m = m * 2*pi/L,

so that coeffs(m) approximates fhat(xi_m) / L, a constant field has
coeffs(0) = 1, and cos(xi_m x) has coeffs(+-m) = 1/2.  Because the first
sample sits at x = -L/2 the raw FFT picks up a factor (-1)^m, which is
removed here.

Full-spectrum `SpectralField` objects are the public face.  The solver and
the dyadic blocks work on the half spectrum of real fields through the
`rfft`/`irfft` helpers below, which skip the (-1)^m phase: every operator in
the package is a Fourier multiplier depending on xi only, so the phase
cancels between the forward and inverse transforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Union

import numpy as np
import scipy.fft as sfft

from .errors import AsymmetryError, InvalidFieldError, InvalidParameterError

__all__ = [
    "Grid",
    "RealField",
    "SpectralField",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "helmholtz_inverse",
    "derivative",
    "dealias",
    "dealias_mask",
    "lp_norm",
    "DEFAULT_LENGTH",
    "DEFAULT_POINTS",
]

# L = 512 keeps the bump's tail energy below 1e-10 inside |x| <= L/2 - 10;
# N = 2**20 then gives xi_max = pi*N/L ~ 6434.
DEFAULT_LENGTH = 512.0
DEFAULT_POINTS = 2**20

SYMMETRY_TOL = 1e-10

Symbol = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, float, complex]


@dataclass(frozen=True)
class Grid:
    """Uniform periodic sampling of [-L/2, L/2).

    Attributes:
        length: box length L.
        num_points: number of samples N, a power of two.
    """

    length: float = DEFAULT_LENGTH
    num_points: int = DEFAULT_POINTS

    def __post_init__(self):
        n = int(self.num_points)
        if n != self.num_points or n < 2 or n & (n - 1):
            raise InvalidParameterError(f"num_points must be a power of two >= 2, got {self.num_points}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise InvalidParameterError(f"length must be positive, got {self.length}")
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "num_points", n)

    @property
    def dx(self) -> float:
        return self.length / self.num_points

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.length

    @property
    def xi_max(self) -> float:
        return np.pi * self.num_points / self.length

    @cached_property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * np.arange(self.num_points)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers m in FFT order, covering [-N/2, N/2)."""
        return sfft.fftfreq(self.num_points, 1.0 / self.num_points).astype(np.int64)

    @cached_property
    def xi(self) -> np.ndarray:
        """Physical frequencies in FFT order."""
        return self.wavenumbers * self.dxi

    @cached_property
    def rxi(self) -> np.ndarray:
        """Non-negative frequencies of the half spectrum, m = 0..N/2."""
        return np.arange(self.num_points // 2 + 1) * self.dxi

    @cached_property
    def rweights(self) -> np.ndarray:
        """Multiplicity of each half-spectrum mode in the full spectrum."""
        w = np.full(self.num_points // 2 + 1, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w

    @cached_property
    def _phase(self) -> np.ndarray:
        return np.where(np.arange(self.num_points) % 2 == 0, 1.0, -1.0)

    def fingerprint(self) -> dict:
        return {"length": self.length, "num_points": self.num_points, "xi_max": self.xi_max}


def _check_finite(samples: np.ndarray, what: str = "field"):
    if not np.all(np.isfinite(samples)):
        raise InvalidFieldError(f"{what} contains non-finite values")


@dataclass(frozen=True, eq=False)
class RealField:
    """Real samples u(x_i) on a grid."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (self.grid.num_points,):
            raise InvalidFieldError(f"expected {self.grid.num_points} samples, got shape {s.shape}")
        _check_finite(s)
        object.__setattr__(self, "samples", s)

    @classmethod
    def zeros(cls, grid: Grid) -> "RealField":
        return cls(grid, np.zeros(grid.num_points))

    @classmethod
    def from_function(cls, grid: Grid, func) -> "RealField":
        return cls(grid, func(grid.x))

    def _other(self, other):
        if isinstance(other, RealField):
            if other.grid != self.grid:
                raise InvalidFieldError("fields live on different grids")
            return other.samples
        return other

    def __add__(self, other):
        return RealField(self.grid, self.samples + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RealField(self.grid, self.samples - self._other(other))

    def __rsub__(self, other):
        return RealField(self.grid, self._other(other) - self.samples)

    def __mul__(self, other):
        return RealField(self.grid, self.samples * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return RealField(self.grid, -self.samples)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.samples)))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients indexed like `Grid.wavenumbers` (FFT order)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.grid.num_points,):
            raise InvalidFieldError(f"expected {self.grid.num_points} coefficients, got shape {c.shape}")
        _check_finite(c, "spectrum")
        object.__setattr__(self, "coeffs", c)

    def mode(self, m: int) -> complex:
        """Coefficient of integer wavenumber m."""
        return complex(self.coeffs[m % self.grid.num_points])

    def hermitian_defect(self) -> float:
        """max |c(-m) - conj c(m)| relative to max |c|."""
        c = self.coeffs
        scale = np.max(np.abs(c))
        if scale == 0.0:
            return 0.0
        mirrored = c[(-np.arange(c.size)) % c.size]
        return float(np.max(np.abs(mirrored - np.conj(c))) / scale)


def forward_transform(f: RealField) -> SpectralField:
    _check_finite(f.samples)
    g = f.grid
    return SpectralField(g, sfft.fft(f.samples) * g._phase / g.num_points)


def inverse_transform(F: SpectralField) -> RealField:
    defect = F.hermitian_defect()
    if defect > SYMMETRY_TOL:
        raise AsymmetryError(f"spectrum is not Hermitian (relative defect {defect:.3e})")
    g = F.grid
    z = sfft.ifft(F.coeffs * g._phase) * g.num_points
    return RealField(g, z.real)


def _evaluate_symbol(symbol: Symbol, xi: np.ndarray) -> np.ndarray:
    values = symbol(xi) if callable(symbol) else symbol
    values = np.broadcast_to(np.asarray(values), xi.shape)
    if not np.all(np.isfinite(values)):
        raise InvalidParameterError("multiplier symbol is not finite on the grid frequencies")
    return values


def apply_multiplier(F: SpectralField, symbol: Symbol) -> SpectralField:
    """Scale each coefficient by symbol(xi_m)."""
    return SpectralField(F.grid, F.coeffs * _evaluate_symbol(symbol, F.grid.xi))


def helmholtz_inverse(F: SpectralField) -> SpectralField:
    """(1 - d_x^2)^{-1}, the multiplier 1/(1 + xi^2)."""
    return apply_multiplier(F, lambda xi: 1.0 / (1.0 + xi**2))


def derivative_symbol(xi: np.ndarray, order: int, nyquist: float) -> np.ndarray:
    s = (1j * xi) ** order
    if order % 2:
        # the Nyquist mode has no odd-derivative partner
        s = np.where(np.isclose(np.abs(xi), nyquist), 0.0, s)
    return s


def derivative(F: SpectralField, order: int = 1) -> SpectralField:
    g = F.grid
    return apply_multiplier(F, derivative_symbol(g.xi, order, g.xi_max))


def dealias_mask(xi: np.ndarray, grid: Grid, fraction: float, strict: bool = False) -> np.ndarray:
    """Modes kept by the cutoff fraction * xi_max.

    The default keeps the cutoff itself.  `strict=True` drops it too: with
    the 1/2 rule the mode at exactly xi_max/2 is where (-xi_max/2)^3 folds
    back, so the solver uses the strict form.  fraction = 1 keeps everything.
    """
    if not 0.0 < fraction <= 1.0:
        raise InvalidParameterError(f"dealias fraction must lie in (0, 1], got {fraction}")
    cut = fraction * grid.xi_max
    if strict and fraction < 1.0:
        return np.abs(xi) < cut * (1.0 - 1e-12)
    # relative slack so |xi| == fraction * xi_max survives rounding
    return np.abs(xi) <= cut * (1.0 + 1e-12)


def dealias(F: SpectralField, fraction: float = 2.0 / 3.0) -> SpectralField:
    """Zero every coefficient with |xi_m| > fraction * xi_max."""
    mask = dealias_mask(F.grid.xi, F.grid, fraction)
    return SpectralField(F.grid, np.where(mask, F.coeffs, 0.0))


def lp_norm(f: RealField, p: float) -> float:
    """Rectangle-rule L^p norm; p = inf gives the max norm."""
    return lp_norm_samples(f.samples, f.grid.dx, p)


def lp_norm_samples(samples: np.ndarray, dx: float, p: float) -> float:
    if p is None or np.isnan(p) or p < 1:
        raise InvalidParameterError(f"L^p norm needs p >= 1, got {p}")
    a = np.abs(samples)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    if p == 2:
        return float(np.sqrt(np.dot(a, a) * dx))
    if p == 1:
        return float(a.sum() * dx)
    peak = a.max()
    if peak == 0.0:
        return 0.0
    # scale first so |f|^p cannot underflow for tiny block amplitudes
    return float(peak * (np.sum((a / peak) ** p) * dx) ** (1.0 / p))


# ---------------------------------------------------------------------------
# half-spectrum helpers for real fields (phase-free, see module docstring)


def rfft(samples: np.ndarray) -> np.ndarray:
    return sfft.rfft(samples) / samples.shape[-1]


def irfft(coeffs: np.ndarray, n: int) -> np.ndarray:
    return sfft.irfft(coeffs * n, n)


def rphase(grid: Grid) -> np.ndarray:
    """(-1)^m on the half spectrum; converts physical coefficients to rfft layout."""
    return _rphase(grid.num_points)


@lru_cache(maxsize=8)
def _rphase(n: int) -> np.ndarray:
    return np.where(np.arange(n // 2 + 1) % 2 == 0, 1.0, -1.0)


def field_from_half_spectrum(grid: Grid, physical: np.ndarray) -> RealField:
    """Real field whose physical coefficients for m = 0..N/2 are `physical`."""
    c = np.asarray(physical, dtype=complex) * rphase(grid)
    c[0] = c[0].real
    c[-1] = c[-1].real
    return RealField(grid, irfft(c, grid.num_points))


def half_spectrum_energy(grid: Grid, coeffs: np.ndarray) -> float:
    """sum_i |f_i|^2 dx computed from half-spectrum coefficients (Parseval)."""
    return float(grid.length * np.dot(grid.rweights, np.abs(coeffs) ** 2))


@dataclass(frozen=True)
class SpectralOps:
    """Precomputed half-spectrum symbols for one grid."""

    grid: Grid
    ik: np.ndarray = field(repr=False)
    helm: np.ndarray = field(repr=False)

    def mask(self, fraction: float) -> np.ndarray:
        return _mask(self.grid, float(fraction))


@lru_cache(maxsize=8)
def _mask(grid: Grid, fraction: float) -> np.ndarray:
    return dealias_mask(grid.rxi, grid, fraction, strict=True)


@lru_cache(maxsize=8)
def spectral_ops(grid: Grid) -> SpectralOps:
    xi = grid.rxi
    ik = 1j * xi
    ik[-1] = 0.0
    return SpectralOps(grid, ik, 1.0 / (1.0 + xi**2))
