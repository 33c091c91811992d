"""Exit criteria at the default resolution (L = 512, N = 2^20).

Each test appends one PASS/FAIL line to the session log, which is printed
in the terminal summary (and to stdout), then asserts the same verdict.
A criterion's runtime budget is part of its verdict.
"""

import math
import time

import numpy as np
import pytest
from oracles import band_limited, oracle_source_b, oracle_source_Q

from besovlab.experiments import (
    exp_ch_lower_bound,
    exp_conservation,
    exp_discontinuity,
    exp_localization,
    exp_novikov_lower_bound,
    exp_remainder_scaling,
)
from besovlab.initial_data import make_bump
from besovlab.littlewood_paley import build_partition, lp_block, random_band_limited
from besovlab.pde_models import CAMASSA_HOLM, NOVIKOV, b_family, source_P, source_Q
from besovlab.spectral_core import Grid, lp_norm

pytestmark = pytest.mark.acceptance

GRID = Grid()


@pytest.fixture(scope="module")
def partition():
    return build_partition(GRID)


def verdict(log, number, title, passed, detail, elapsed, budget):
    ok = bool(passed) and elapsed < budget
    timing = f"{elapsed:.1f} s of {budget:g} s"
    line = f"criterion {number} {'PASS' if ok else 'FAIL'} {title}: {detail} [{timing}]"
    log.append(line)
    print(line)
    assert passed, line
    assert elapsed < budget, f"over the runtime budget: {line}"


def failing(report):
    return ", ".join(f"{r.quantity}[{r.index}]={r.measured:.4g}" for r in report.failures()) or "none"


def test_criterion_1_partition_of_unity(acceptance_log, partition):
    t0 = time.perf_counter()
    xi = GRID.rxi
    # enough annuli to cover every grid frequency, including those above the
    # top representable block
    top = math.ceil(math.log2(GRID.xi_max / 0.75))
    symbols = np.array([partition.symbol(j, xi) for j in range(-1, top + 1)])
    residual = float(np.max(np.abs(symbols.sum(axis=0) - 1.0)))
    sq = (symbols**2).sum(axis=0)
    lo, hi = float(sq.min()), float(sq.max())
    elapsed = time.perf_counter() - t0
    passed = residual <= 1e-12 and lo >= 0.5 - 1e-15 and hi <= 1.0 + 1e-15
    detail = f"max residual {residual:.2e} (<= 1e-12), squared sum in [{lo:.6f}, {hi:.6f}] (within [1/2, 1])"
    verdict(acceptance_log, 1, "partition of unity", passed, detail, elapsed, 1.0)


def test_criterion_2_reconstruction_and_leakage(acceptance_log):
    t0 = time.perf_counter()
    grid = Grid(512.0, 2**16)
    part = build_partition(grid)
    rng = np.random.default_rng(20240101)
    recon, leak = 0.0, 0.0
    js = list(part.indices)
    for _ in range(20):
        u = random_band_limited(grid, rng, part.coverage)
        scale = np.max(np.abs(u.samples))
        blocks = {j: lp_block(u, j, part) for j in js}
        total = sum(b.samples for b in blocks.values())
        recon = max(recon, float(np.max(np.abs(total - u.samples)) / scale))
        for j in js:
            for jj in js:
                if abs(j - jj) >= 2:
                    twice = lp_block(blocks[j], jj, part).samples
                    leak = max(leak, float(np.max(np.abs(twice)) / scale))
    elapsed = time.perf_counter() - t0
    passed = recon <= 1e-12 and leak <= 1e-12
    detail = f"20 fields: max |sum_j Delta_j u - u| / max|u| = {recon:.2e}, max |Delta_j' Delta_j u| / max|u| = {leak:.2e} (<= 1e-12)"
    verdict(acceptance_log, 2, "LP reconstruction and leakage", passed, detail, elapsed, 10.0)


def test_criterion_3_packet_localization(acceptance_log):
    t0 = time.perf_counter()
    parts, ok = [], True
    for k, n in ((5, 1), (5, 2), (6, 1)):
        rep = exp_localization(k, n, grid=GRID)
        res = rep.rows_for("identity_residual")[0].measured
        leak = rep.rows_for("leakage")[0].measured
        contained = rep.values["support_contained"]
        ok &= rep.verdict
        parts.append(f"(k,n)=({k},{n}) residual {res:.1e} leakage {leak:.1e} contained={contained}")
    elapsed = time.perf_counter() - t0
    verdict(acceptance_log, 3, "packet localization", ok, "; ".join(parts), elapsed, 30.0)


def test_criterion_4_ch_lower_bound(acceptance_log):
    t0 = time.perf_counter()
    bump = make_bump(GRID)
    phi0 = float(np.max(np.abs(bump.field.samples)))
    k, sigma = 5, 4.0
    parts, ok = [], True
    for p in (2.0, math.inf):
        rep = exp_ch_lower_bound(k, sigma, p, (1, 2), grid=GRID)
        # |f_i f_n| <= phi(0) |phi|, so 2^{k(n+1) sigma} ||I2|| <= 2 phi(0) ||phi||_p / (1 - 2^{-k sigma})
        i2_bound = 2.0 * phi0 * lp_norm(bump.field, p) / (1.0 - 2.0 ** (-k * sigma))
        i2 = [r.measured for r in rep.rows_for("I2_scaled")]
        bounded = all(v <= i2_bound for v in i2)
        ok &= rep.verdict and bounded
        r = [row.measured for row in rep.rows_for("r_n")]
        spread = rep.rows_for("r_n_spread")[0].measured
        parts.append(
            f"p={p:g}: r_n={[f'{v:.4f}' for v in r]} spread x{spread:.3f}, "
            f"max ||I2|| 2^(k(n+1)sigma) = {max(i2):.3g} <= {i2_bound:.3g}; failing: {failing(rep)}"
        )
    elapsed = time.perf_counter() - t0
    verdict(acceptance_log, 4, "CH lower bound", ok, "; ".join(parts), elapsed, 60.0)


def test_criterion_5_novikov_bounds(acceptance_log):
    t0 = time.perf_counter()
    rep = exp_novikov_lower_bound(4.0, (4, 5, 6, 7, 8), grid=GRID)
    elapsed = time.perf_counter() - t0
    d2 = rep.rows_for("domination_square")[0].measured
    d3 = rep.rows_for("domination_cube")[0].measured
    rho = [r.measured for r in rep.rows_for("rho_j")]
    var = rep.rows_for("rho_variation")[0].measured
    detail = (
        f"min domination ratios {d2:.3f} (square), {d3:.3f} (cube) over {rep.values['checked_frequencies']} "
        f"frequencies; rho_j={[f'{v:.3e}' for v in rho]} (>= 1e-3), variation x{var:.3f} (<= 4); "
        f"failing: {failing(rep)}"
    )
    verdict(acceptance_log, 5, "Novikov spectral bounds", rep.verdict, detail, elapsed, 60.0)


def test_criterion_6_remainder_order(acceptance_log):
    t0 = time.perf_counter()
    parts, ok = [], True
    for model in (CAMASSA_HOLM, b_family(3.0), NOVIKOV):
        rep = exp_remainder_scaling(model, sigma=4.0, p=2.0, grid=GRID)
        ok &= rep.verdict
        w = rep.rows_for("remainder_slope")[0].measured
        first = [f"{r.measured:.3f}" for r in rep.rows_for("first_difference_slope")]
        ts = rep.parameters["t_list"]
        parts.append(
            f"{model.label}: t in [{ts[0]:.0e}, {ts[-1]:.0e}] remainder slope {w:.3f}, "
            f"first-difference slopes {first}"
        )
    elapsed = time.perf_counter() - t0
    verdict(acceptance_log, 6, "remainder order", ok, "; ".join(parts), elapsed, 600.0)


def test_criterion_7_discontinuity(acceptance_log):
    t0 = time.perf_counter()
    parts, ok = [], True
    for model, n_list in ((CAMASSA_HOLM, (1, 2)), (NOVIKOV, (6, 8))):
        rep = exp_discontinuity(model, 5, n_list, 0.05, sigma=4.0, p=2.0, grid=GRID)
        ok &= rep.verdict
        D = [f"{r.measured:.3e}" for r in rep.rows_for("D_n")]
        ratio = rep.rows_for("nondecay_ratio")[0].measured
        slope = rep.rows_for("control_slope")[0].measured
        parts.append(
            f"{model.label} n={list(n_list)}: D_n={D}, c1={rep.values['c1']:.4f}, "
            f"non-decay {ratio:.3f} (>= 0.5), control slope {slope:.3f}; failing: {failing(rep)}"
        )
    elapsed = time.perf_counter() - t0
    verdict(acceptance_log, 7, "discontinuity mechanism", ok, "; ".join(parts), elapsed, 900.0)


def test_criterion_8_solver_validity(acceptance_log):
    t0 = time.perf_counter()
    parts, ok = [], True
    for model in (CAMASSA_HOLM, NOVIKOV, b_family(2.0), b_family(3.0)):
        rep = exp_conservation(model, 0.01, grid=GRID)
        ok &= rep.verdict
        drift = rep.rows[0]
        text = f"{model.label}: {drift.quantity} {drift.measured:.2e} (<= {drift.threshold:g})"
        if rep.rows_for("halving_ratio"):
            ratio = rep.rows_for("halving_ratio")[0].measured
            text += f", stress drift ratio under dt halving x{ratio:.1f}"
        parts.append(text)

    grid = Grid(2 * np.pi, 256)
    rng = np.random.default_rng(7)
    err_p = err_q = 0.0
    for _ in range(3):
        u = band_limited(grid, rng, 85)
        err_p = max(err_p, float(np.max(np.abs(source_P(u).samples - oracle_source_b(u, 2.0)))))
        v = band_limited(grid, rng, 63)
        err_q = max(err_q, float(np.max(np.abs(source_Q(v).samples - oracle_source_Q(v)))))
    ok &= err_p <= 1e-10 and err_q <= 1e-10
    parts.append(f"N=256 oracle: |P - P_direct| = {err_p:.1e}, |Q - Q_direct| = {err_q:.1e} (<= 1e-10)")
    elapsed = time.perf_counter() - t0
    verdict(acceptance_log, 8, "solver validity", ok, "; ".join(parts), elapsed, 300.0)
