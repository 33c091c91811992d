"""Independent O(N^2) reference computations used by several test modules."""

import numpy as np

from besovlab.spectral_core import Grid, RealField


def modes(grid: Grid) -> np.ndarray:
    """Integer mode numbers -N/2 .. N/2-1 in ascending order."""
    n = grid.num_points
    return np.arange(-n // 2, n // 2)


def dft(grid: Grid, samples: np.ndarray) -> np.ndarray:
    """(1/N) sum_i f(x_i) exp(-i xi_m x_i), modes ascending."""
    xi = modes(grid) * grid.dxi
    return np.exp(-1j * np.outer(xi, grid.x)) @ samples / grid.num_points


def synth(grid: Grid, coeffs_by_mode: dict) -> np.ndarray:
    """sum_m c_m exp(i xi_m x) for a {mode: coefficient} mapping, as real samples."""
    out = np.zeros(grid.num_points, dtype=complex)
    for m, c in coeffs_by_mode.items():
        out += c * np.exp(1j * m * grid.dxi * grid.x)
    return out.real


def conv(*factors):
    """Exact discrete convolution of mode-indexed coefficient dicts (no aliasing)."""
    acc = factors[0]
    for f in factors[1:]:
        nxt = {}
        for a, ca in acc.items():
            for b, cb in f.items():
                nxt[a + b] = nxt.get(a + b, 0) + ca * cb
        acc = nxt
    return acc


def _as_dict(grid, c):
    return {int(m): v for m, v in zip(modes(grid), c) if abs(v) > 0}


def _kept(grid, fraction):
    cut = fraction * grid.xi_max
    return lambda m: abs(m * grid.dxi) < cut


def oracle_source_b(u: RealField, b: float, fraction: float = 2 / 3) -> np.ndarray:
    """-d_x (1-d_x^2)^{-1} (b/2 u^2 + (3-b)/2 u_x^2) by direct mode convolution."""
    g = u.grid
    c = _as_dict(g, dft(g, u.samples))
    cx = {m: 1j * m * g.dxi * v for m, v in c.items()}
    uu, xx = conv(c, c), conv(cx, cx)
    keep = _kept(g, fraction)
    out = {}
    for m in set(uu) | set(xx):
        if keep(m):
            xi = m * g.dxi
            val = 0.5 * b * uu.get(m, 0) + 0.5 * (3 - b) * xx.get(m, 0)
            out[m] = -1j * xi / (1 + xi**2) * val
    return synth(g, out)


def oracle_source_Q(u: RealField, fraction: float = 0.5) -> np.ndarray:
    """-(1-d_x^2)^{-1} (u_x^3/2 + d_x(3/2 u u_x^2 + u^3)) by direct mode convolution."""
    g = u.grid
    c = _as_dict(g, dft(g, u.samples))
    cx = {m: 1j * m * g.dxi * v for m, v in c.items()}
    xxx, uxx, uuu = conv(cx, cx, cx), conv(c, cx, cx), conv(c, c, c)
    keep = _kept(g, fraction)
    out = {}
    for m in set(xxx) | set(uxx) | set(uuu):
        if keep(m):
            xi = m * g.dxi
            val = 0.5 * xxx.get(m, 0) + 1j * xi * (1.5 * uxx.get(m, 0) + uuu.get(m, 0))
            out[m] = -val / (1 + xi**2)
    return synth(g, out)


def band_limited(grid: Grid, rng: np.random.Generator, top_mode: int, amplitude: float = 1.0) -> RealField:
    """Random real field with modes |m| <= top_mode, O(amplitude) in size."""
    m = np.arange(1, top_mode + 1)
    c = (rng.standard_normal(top_mode) + 1j * rng.standard_normal(top_mode)) / m
    x = grid.x
    s = rng.standard_normal() * 0.5 + 2 * np.real(np.exp(1j * np.outer(x, m * grid.dxi)) @ c)
    s *= amplitude / np.max(np.abs(s))
    return RealField(grid, s)
