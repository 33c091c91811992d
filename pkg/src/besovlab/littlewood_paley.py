"""
Dyadic partition of unity, Littlewood-Paley blocks and Besov norms.

The low-pass profile chi equals 1 on |xi| <= 3/4 and 0 on |xi| >= 4/3, with
the exp(-1/t) smooth step in between.  The annulus profile is

    phi(xi) = chi(xi / 2) - chi(xi),

supported in 3/4 <= |xi| <= 8/3 and identically 1 on 4/3 <= |xi| <= 3/2.
The sum chi + sum_{j<=J} phi(2^-j .) telescopes to chi(2^-(J+1) .), so the
partition is exact up to rounding wherever that last factor is 1.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BandLimitWarning,
    InvalidParameterError,
    OutOfBandError,
    ResolutionError,
)
from .spectral_core import (
    Grid,
    RealField,
    half_spectrum_energy,
    irfft,
    lp_norm_samples,
    rfft,
)

__all__ = [
    "smooth_step",
    "chi_profile",
    "phi_profile",
    "DyadicPartition",
    "BesovParams",
    "build_partition",
    "lp_block",
    "block_norms",
    "besov_norm",
    "besov_from_blocks",
    "product_estimate_probe",
    "ProbeResult",
]

CHI_PLATEAU = 0.75
CHI_EDGE = 4.0 / 3.0
TRANSITION = "exp(-1/t) smooth step; chi = 1 on |xi| <= 3/4, 0 on |xi| >= 4/3; phi = chi(xi/2) - chi(xi)"


def _tau(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t):
    """C-infinity step: 1 for t <= 0, 0 for t >= 1."""
    t = np.asarray(t, dtype=float)
    a = _tau(1.0 - t)
    return a / (a + _tau(t))


def chi_profile(xi):
    r = np.abs(np.asarray(xi, dtype=float))
    return smooth_step((r - CHI_PLATEAU) / (CHI_EDGE - CHI_PLATEAU))


def phi_profile(xi):
    xi = np.asarray(xi, dtype=float)
    return chi_profile(0.5 * xi) - chi_profile(xi)


@dataclass(frozen=True)
class _Block:
    start: int
    stop: int
    symbol: np.ndarray


@dataclass(frozen=True, eq=False)
class DyadicPartition:
    """The chi/phi filter bank restricted to one grid.

    Each block j keeps only the half-spectrum index range where its symbol
    is nonzero, so applying a block touches a narrow slice.
    """

    grid: Grid
    j_max: int
    _blocks: dict = field(default_factory=dict, repr=False)

    @property
    def indices(self) -> range:
        return range(-1, self.j_max + 1)

    @staticmethod
    def chi(xi):
        return chi_profile(xi)

    @staticmethod
    def phi(xi):
        return phi_profile(xi)

    def symbol(self, j: int, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if j <= -2:
            return np.zeros_like(xi)
        if j == -1:
            return chi_profile(xi)
        return phi_profile(xi / 2.0**j)

    @property
    def coverage(self) -> float:
        """Frequency up to which chi + sum phi_j (j <= j_max) equals 1."""
        return CHI_PLATEAU * 2.0 ** (self.j_max + 1)

    def block(self, j: int) -> _Block:
        if j > self.j_max:
            raise OutOfBandError(f"block {j} exceeds j_max = {self.j_max} for this grid")
        if j not in self._blocks:
            xi = self.grid.rxi
            upper = CHI_EDGE if j == -1 else 8.0 / 3.0 * 2.0**j
            lower = 0.0 if j == -1 else 0.75 * 2.0**j
            start = int(np.floor(lower / self.grid.dxi))
            stop = min(int(np.ceil(upper / self.grid.dxi)) + 1, xi.size)
            self._blocks[j] = _Block(start, stop, self.symbol(j, xi[start:stop]))
        return self._blocks[j]

    def apply(self, coeffs: np.ndarray, j: int) -> np.ndarray:
        """Delta_j on a half spectrum."""
        out = np.zeros_like(coeffs)
        if j <= -2:
            return out
        b = self.block(j)
        out[b.start:b.stop] = coeffs[b.start:b.stop] * b.symbol
        return out

    def fingerprint(self) -> dict:
        probe = np.linspace(0.0, 3.0, 3001)
        digest = hashlib.sha256(np.round(phi_profile(probe), 15).tobytes()).hexdigest()[:16]
        return {"transition": TRANSITION, "j_max": self.j_max, "phi_sha256": digest}


@dataclass(frozen=True)
class BesovParams:
    s: float
    p: float = 2.0
    r: float = math.inf

    def __post_init__(self):
        for name in ("p", "r"):
            v = getattr(self, name)
            if v is None or np.isnan(v) or v < 1:
                raise InvalidParameterError(f"Besov index {name} must be >= 1, got {v}")


def build_partition(grid: Grid) -> DyadicPartition:
    """Partition whose top block j_max still fits below xi_max."""
    top = grid.xi_max * 3.0 / 8.0
    if top < 1.0:
        raise ResolutionError(f"grid too coarse for dyadic blocks (xi_max = {grid.xi_max:.3g})")
    j_max = int(math.floor(math.log2(top)))
    return DyadicPartition(grid, j_max)


def lp_block(u: RealField, j: int, part: DyadicPartition) -> RealField:
    """Delta_j u.  j <= -2 gives zero, j = -1 the low-pass chi(D)."""
    if j > part.j_max:
        raise OutOfBandError(f"block {j} exceeds j_max = {part.j_max} for this grid")
    n = u.grid.num_points
    if j <= -2:
        return RealField.zeros(u.grid)
    return RealField(u.grid, irfft(part.apply(rfft(u.samples), j), n))


def _warn_band(coeffs: np.ndarray, part: DyadicPartition):
    g = part.grid
    outside = g.rxi > part.coverage
    if not outside.any():
        return
    total = half_spectrum_energy(g, coeffs)
    if total == 0.0:
        return
    tail = half_spectrum_energy(g, np.where(outside, coeffs, 0.0))
    if tail > 1e-24 * total:
        warnings.warn(
            f"field has relative energy {tail / total:.2e} above |xi| = {part.coverage:.4g}, "
            "beyond the representable blocks",
            BandLimitWarning,
            stacklevel=3,
        )


def block_norms(u, p: float, part: DyadicPartition, js=None, *, spectrum=None) -> np.ndarray:
    """||Delta_j u||_{L^p} for each j in `js` (default: all blocks).

    `u` may be a RealField or a raw sample array on `part.grid`; a
    precomputed half spectrum can be passed to skip the forward FFT.
    """
    g = part.grid
    samples = u.samples if isinstance(u, RealField) else u
    coeffs = rfft(samples) if spectrum is None else spectrum
    js = list(part.indices if js is None else js)
    out = np.empty(len(js))
    for idx, j in enumerate(js):
        if j <= -2:
            out[idx] = 0.0
            continue
        if p == 2:
            b = part.block(j)
            c = coeffs[b.start:b.stop] * b.symbol
            w = g.rweights[b.start:b.stop]
            out[idx] = math.sqrt(g.length * float(np.dot(w, np.abs(c) ** 2)))
        else:
            out[idx] = lp_norm_samples(irfft(part.apply(coeffs, j), g.num_points), g.dx, p)
    return out


def besov_from_blocks(norms, js, s: float, r: float) -> float:
    weighted = np.asarray(norms) * 2.0 ** (s * np.asarray(js, dtype=float))
    if np.isinf(r):
        return float(weighted.max()) if weighted.size else 0.0
    return float(np.sum(weighted**r) ** (1.0 / r))


def besov_norm(u, bp: BesovParams, part: DyadicPartition, *, spectrum=None, warn: bool = True) -> float:
    """Discrete B^s_{p,r} norm over blocks -1..j_max."""
    samples = u.samples if isinstance(u, RealField) else u
    coeffs = rfft(samples) if spectrum is None else spectrum
    if warn:
        _warn_band(coeffs, part)
    js = list(part.indices)
    return besov_from_blocks(block_norms(samples, bp.p, part, js, spectrum=coeffs), js, bp.s, bp.r)


@dataclass
class ProbeResult:
    max_ratio: float
    ratios: np.ndarray
    kind: str
    params: BesovParams


def random_band_limited(grid: Grid, rng: np.random.Generator, max_freq: float, decay: float = 2.0) -> RealField:
    """Smooth random real field with spectrum on |xi| <= max_freq.

    Coefficients are drawn per physical frequency, so the same seed gives the
    same continuum function on any grid with the same length.
    """
    m_top = int(max_freq / grid.dxi)
    if m_top >= grid.num_points // 2:
        raise OutOfBandError("requested band exceeds the grid's Nyquist frequency")
    xi = np.arange(m_top + 1) * grid.dxi
    amp = (1.0 + xi) ** (-decay)
    c = (rng.standard_normal(m_top + 1) + 1j * rng.standard_normal(m_top + 1)) * amp
    c[0] = c[0].real
    full = np.zeros(grid.num_points // 2 + 1, dtype=complex)
    full[: m_top + 1] = c
    return RealField(grid, irfft(full, grid.num_points))


def product_estimate_probe(
    count: int,
    bp: BesovParams,
    seed=0,
    *,
    grid: Grid | None = None,
    kind: str = "product",
    max_freq: float | None = None,
) -> ProbeResult:
    """Empirical constant in the Besov product estimates.

    kind="product": max ||uv||_{B^{s-2}} / (||u||_{B^{s-2}} ||v||_{B^{s-1}}),
    which needs s > max(1 + 1/p, 3/2).
    kind="algebra": max ||uv||_{B^s} / (||u||_{B^s}||v||_inf + ||v||_{B^s}||u||_inf).
    """
    if kind == "product" and not bp.s > max(1.0 + 1.0 / bp.p, 1.5):
        raise InvalidParameterError(f"product estimate needs s > max(1+1/p, 3/2), got s={bp.s}")
    if kind not in ("product", "algebra"):
        raise InvalidParameterError(f"unknown probe kind {kind!r}")
    grid = grid or Grid(64.0, 2048)
    part = build_partition(grid)
    # products double the band; keep them inside the covered blocks
    band = max_freq if max_freq is not None else min(part.coverage, grid.xi_max) / 2.5
    rng = np.random.default_rng(seed)
    ratios = np.empty(count)
    for k in range(count):
        u = random_band_limited(grid, rng, band)
        v = random_band_limited(grid, rng, band)
        ratios[k] = _product_ratio(u, v, bp, part, kind)
    return ProbeResult(float(ratios.max()) if count else 0.0, ratios, kind, bp)


def _product_ratio(u: RealField, v: RealField, bp: BesovParams, part: DyadicPartition, kind: str) -> float:
    uv = u * v

    def norm(f, s):
        return besov_norm(f, BesovParams(s, bp.p, bp.r), part, warn=False)

    if kind == "product":
        num = norm(uv, bp.s - 2)
        den = norm(u, bp.s - 2) * norm(v, bp.s - 1)
    else:
        num = norm(uv, bp.s)
        den = norm(u, bp.s) * v.max_abs() + norm(v, bp.s) * u.max_abs()
    if num == 0.0:
        return 0.0
    return num / den
