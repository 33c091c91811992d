import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.signal import fftconvolve

from besovlab.errors import ConfigurationError, DegenerateInputError, PreconditionError
from besovlab.experiments import (
    CATALOG,
    ExperimentReport,
    Row,
    Thresholds,
    default_t_list,
    exp_ch_lower_bound,
    exp_conservation,
    exp_discontinuity,
    exp_localization,
    exp_novikov_lower_bound,
    exp_remainder_scaling,
    graded_convolve,
    list_experiments,
    measure_localization,
    novikov_rho_bound,
)
from besovlab.littlewood_paley import build_partition
from besovlab.pde_models import CAMASSA_HOLM, NOVIKOV, b_family
from besovlab.spectral_core import Grid, RealField

MEDIUM = Grid(512.0, 2**16)  # xi_max ~ 402, j_max = 7


def power_law(m, step, sigma=4.0):
    xi = np.arange(-m, m + 1) * step
    return (1.0 + np.abs(xi)) ** (-sigma - 0.5)


class TestRowsAndReports:
    def test_row_relations(self):
        assert Row("q", 0, 2.0, 1.0).passed
        assert not Row("q", 0, 2.0, 1.0, "<=").passed
        assert Row("q", 0, 1.0, (0.9, 1.1)).passed and Row("q", 0, 1.0, (0.9, 1.1)).relation == "in"
        assert Row("q", 0, 5.0).passed is None

    def test_nan_fails_every_relation(self):
        assert not Row("q", 0, math.nan, 1.0).passed
        assert not Row("q", 0, math.nan, 1.0, "<=").passed
        assert not Row("q", 0, math.nan, (0.0, 1.0)).passed

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            Row("q", 0, 1.0, 1.0, "==")

    def test_verdict(self):
        rep = ExperimentReport("x", {}, {}, {}, {})
        assert not rep.verdict  # nothing gating
        rep.add("info", 0, 3.0)
        assert not rep.verdict
        rep.add("a", 0, 2.0, 1.0)
        assert rep.verdict
        rep.add("b", 0, 0.5, 1.0)
        assert not rep.verdict
        assert [r.quantity for r in rep.failures()] == ["b"]
        assert rep.quantities() == ["info", "a", "b"]
        assert "FAIL" in rep.summary() and "b" in rep.summary()

    def test_thresholds_serialise(self):
        d = Thresholds().to_dict()
        assert d["remainder_slope"] == [1.8, 2.2]
        assert d["c_star"] == 1e-3


def exact_convolution(a, b, step):
    """Correctly rounded sum_m a(m) b(k - m), term by term with fsum."""
    out = np.empty(a.size + b.size - 1)
    for k in range(out.size):
        lo, hi = max(0, k - b.size + 1), min(k, a.size - 1)
        out[k] = math.fsum(a[i] * b[k - i] for i in range(lo, hi + 1))
    return out * step


class TestGradedConvolve:
    EPS = np.finfo(float).eps

    @settings(max_examples=15, deadline=None)
    @given(m=st.integers(1, 120), sigma=st.floats(1.0, 6.0), ratio=st.sampled_from([2.0, 4.0, 16.0]))
    def test_error_bound_everywhere(self, m, sigma, ratio):
        a = power_law(m, 0.1, sigma)
        want = exact_convolution(a, a, 0.1)
        rel = np.abs(graded_convolve(a, a, 0.1, ratio=ratio) - want) / want
        assert rel.max() <= 8 * self.EPS * ratio ** (2 * sigma + 1) + 1e-13

    @pytest.mark.parametrize("sigma", [2.0, 4.0, 5.0])
    def test_near_machine_precision_on_half_range(self, sigma):
        m = 400
        a = power_law(m, 1.0, sigma)
        want = exact_convolution(a, a, 1.0)
        mid = want.size // 2
        half = slice(mid - m // 2, mid + m // 2 + 1)
        rel = np.abs(graded_convolve(a, a, 1.0) - want)[half] / want[half]
        assert rel.max() <= 1e-10

    def test_unequal_inputs(self):
        a = power_law(100, 0.05)
        b = power_law(60, 0.05, sigma=3.0)
        want = exact_convolution(a, b, 0.05)
        mid = want.size // 2
        got = graded_convolve(a, b, 0.05, first=0.5, ratio=4.0)
        assert got[mid] == pytest.approx(want[mid], rel=1e-14)
        assert np.max(np.abs(got - want) / want) <= 1e-10

    def test_plain_fft_loses_the_tail(self):
        a = power_law(4000, 0.05, sigma=6.0)
        want = np.convolve(a, a) * 0.05  # positive terms: accurate to ~1e-15 relative
        mid, q = want.size // 2, 2000
        half = slice(mid - q, mid + q + 1)
        plain = fftconvolve(a, a) * 0.05
        graded = graded_convolve(a, a, 0.05)
        assert np.max(np.abs(plain - want)[half] / want[half]) > 1e-6
        assert np.max(np.abs(graded - want)[half] / want[half]) <= 1e-10

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            graded_convolve(np.ones(4), np.ones(3), 1.0)


class TestLocalization:
    def test_zero_field(self):
        part = build_partition(MEDIUM)
        with pytest.raises(DegenerateInputError):
            measure_localization(RealField.zeros(MEDIUM), 3, part)

    @pytest.mark.parametrize("k,n,i", [(5, 1, None), (5, 1, 0), (3, 2, 0)])
    def test_packets(self, k, n, i):
        rep = exp_localization(k, n, i, grid=MEDIUM)
        assert rep.verdict
        assert rep.rows_for("support_containment")[0].passed is None

    def test_amplitude_invariant(self):
        a = exp_localization(5, 1, grid=MEDIUM).rows_for("identity_residual")[0].measured
        b = exp_localization(5, 1, amplitude=1e-6, grid=MEDIUM).rows_for("identity_residual")[0].measured
        assert a == pytest.approx(b, abs=1e-15)

    def test_block_above_grid(self):
        with pytest.raises(PreconditionError):
            exp_localization(5, 2, grid=MEDIUM)


class TestLowerBounds:
    def test_ch_single_term(self):
        rep = exp_ch_lower_bound(5, 4.0, 2.0, (1,), grid=MEDIUM)
        assert rep.verdict
        (r,) = rep.rows_for("r_n")
        assert r.measured > 1e-3

    def test_ch_p_infinity(self):
        assert exp_ch_lower_bound(5, 4.0, math.inf, (1,), grid=MEDIUM).verdict

    def test_ch_without_cross_terms_fails(self):
        rep = exp_ch_lower_bound(5, 4.0, 2.0, (1,), n_max=0, grid=MEDIUM)
        assert not rep.verdict
        assert rep.notes

    def test_ch_errors(self):
        with pytest.raises(ConfigurationError):
            exp_ch_lower_bound(5, 4.0, 2.0, (), grid=MEDIUM)
        with pytest.raises(PreconditionError):
            exp_ch_lower_bound(5, 4.0, 2.0, (1, 2), grid=MEDIUM)

    def test_novikov(self):
        rep = exp_novikov_lower_bound(4.0, (4, 5), grid=MEDIUM)
        assert rep.verdict
        for row in rep.rows_for("rho_j_vs_derived_bound"):
            assert row.passed

    def test_novikov_range(self):
        with pytest.raises(PreconditionError):
            exp_novikov_lower_bound(4.0, (6,), grid=MEDIUM)

    def test_rho_bound_scaling(self):
        # the bound grows like 2^{sigma j} * 2^{-(sigma+1/2) j} * 2^{j/2} = O(1)
        vals = [novikov_rho_bound(4.0, j) for j in (6, 10, 14)]
        assert max(vals) / min(vals) < 2.0
        assert all(v > 0 for v in vals)


class TestRemainder:
    def test_default_times_span_two_decades(self):
        for model in (CAMASSA_HOLM, NOVIKOV):
            ts = default_t_list(model)
            assert len(ts) == 5 and ts[-1] / ts[0] == pytest.approx(100.0)

    @pytest.mark.parametrize("model", [CAMASSA_HOLM, b_family(3.0), NOVIKOV], ids=lambda m: m.label)
    def test_orders(self, model):
        rep = exp_remainder_scaling(model, k=5, n_max=1, grid=MEDIUM)
        assert rep.verdict, rep.summary()

    @pytest.mark.parametrize("ts", [[1e-3], [0.0, 1e-3], [1e-4, 1e-3]])
    def test_bad_time_lists(self, ts):
        with pytest.raises(ConfigurationError):
            exp_remainder_scaling(CAMASSA_HOLM, ts, k=5, n_max=1, grid=MEDIUM)

    def test_cubic_needs_p2(self):
        with pytest.raises(PreconditionError):
            exp_remainder_scaling(NOVIKOV, p=math.inf, grid=MEDIUM)


class TestDiscontinuity:
    def test_quadratic(self):
        rep = exp_discontinuity(CAMASSA_HOLM, k=3, grid=MEDIUM)
        assert rep.verdict, rep.summary()
        assert rep.values["c1"] > 0

    def test_cubic(self):
        rep = exp_discontinuity(NOVIKOV, n_list=(4, 5), grid=MEDIUM)
        assert rep.verdict, rep.summary()

    def test_epsilon_zero_is_degenerate(self):
        rep = exp_discontinuity(CAMASSA_HOLM, k=3, epsilon=0.0, control=False, grid=MEDIUM)
        assert not rep.verdict
        assert all(r.measured == 0.0 for r in rep.rows_for("D_n"))
        assert rep.rows_for("epsilon_positive")[0].passed is False

    def test_negative_epsilon(self):
        with pytest.raises(PreconditionError):
            exp_discontinuity(CAMASSA_HOLM, k=3, epsilon=-1.0, grid=MEDIUM)

    def test_block_above_grid(self):
        with pytest.raises(PreconditionError):
            exp_discontinuity(CAMASSA_HOLM, k=5, n_list=(1, 2), grid=MEDIUM)


class TestConservation:
    def test_zero_time(self):
        rep = exp_conservation(CAMASSA_HOLM, 0.0, k=5, n_max=1, grid=MEDIUM)
        assert rep.rows_for("h1_drift")[0].measured == 0.0
        assert not rep.rows_for("halving_order")

    def test_negative_time(self):
        with pytest.raises(PreconditionError):
            exp_conservation(CAMASSA_HOLM, -1.0, grid=MEDIUM)

    @pytest.mark.parametrize(
        "model,extra",
        [(CAMASSA_HOLM, {"k": 5, "n_max": 1}), (NOVIKOV, {}), (b_family(3.0), {"k": 5, "n_max": 1})],
        ids=["ch", "novikov", "b3"],
    )
    def test_small_grid(self, model, extra):
        rep = exp_conservation(model, stress_block=4, grid=MEDIUM, **extra)
        assert rep.verdict, rep.summary()


class TestCatalog:
    def test_six_entries(self):
        names = [e["name"] for e in list_experiments()]
        assert names == [
            "localization",
            "ch-lower-bound",
            "novikov-lower-bound",
            "remainder",
            "discontinuity",
            "conservation",
        ]

    def test_functions_exist(self):
        import besovlab.experiments as ex

        for e in CATALOG:
            assert callable(getattr(ex, e["function"]))
            assert e["checks"]

    def test_listing_is_a_copy(self):
        listing = list_experiments()
        listing[0]["name"] = "changed"
        assert CATALOG[0]["name"] == "localization"
