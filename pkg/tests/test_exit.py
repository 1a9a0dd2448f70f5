"""EXIT machinery: estimator/generator closed loop and transfer curves.

Reference values come from two independent oracles implemented here:
``ref_binary_mi`` integrates the binary-Gaussian MI with adaptive
quadrature (scipy.integrate.quad, not the package's Gauss-Hermite rule),
and ``ref_qpsk_mi`` computes the QPSK demodulation MI over AWGN with a
2-D Gauss-Hermite rule applied to the exact posterior.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from etcma.channel import snr_to_sigma
from etcma.exit_charts import (
    ExitCurve,
    binary_gaussian_mi,
    chart_fixed_point,
    emsd_transfer_curve,
    estimate_mi,
    etcmd_transfer_curve,
    gen_apriori_llrs,
    spread_for_binary_mi,
)
from etcma.trellis import FOUR_STATE, TWO_STATE, QPSK_SYMBOLS

LN2 = np.log(2.0)


def ref_binary_mi(spread):
    # I = 1 - E[log2(1+e^-x)], x ~ N(s^2/2, s^2), by adaptive quadrature
    mu, s = 0.5 * spread**2, spread

    def integrand(t):
        x = mu + s * t
        return np.logaddexp(0.0, -x) / LN2 * np.exp(-t * t / 2) / np.sqrt(2 * np.pi)

    val, err = quad(integrand, -12.0, 12.0, limit=200)
    assert err < 1e-6
    return 1.0 - val


def ref_qpsk_mi(sigma_w2):
    """I(X;Y) for unit-energy QPSK in complex AWGN, per-real variance sigma_w2."""
    nodes, weights = np.polynomial.hermite.hermgauss(80)
    s = np.sqrt(2.0 * sigma_w2)  # y = x + s/sqrt(2)*(g1+j*g2) scaling per dim
    wi, wq = np.meshgrid(nodes, nodes)
    noise = np.sqrt(2 * sigma_w2) * (wi + 1j * wq)  # hermgauss measure e^{-t^2}
    w2d = np.outer(weights, weights) / np.pi
    total = 0.0
    for x in QPSK_SYMBOLS:
        y = x + noise
        d2 = np.abs(y[..., None] - QPSK_SYMBOLS) ** 2
        lam = (np.abs(y - x)[..., None] ** 2 - d2) / (2 * sigma_w2)
        penalty = np.log2(np.sum(np.exp2(lam / LN2), axis=-1))
        total += np.sum(w2d * penalty) / 4.0
    return 2.0 - total


class TestEstimator:
    def test_uniform_llrs_give_exact_zero(self):
        I = estimate_mi(np.zeros((7, 4)), np.array([0, 1, 2, 3, 0, 1, 2]))
        assert I == 0.0

    def test_peaked_llrs_give_exact_two(self):
        rows = np.full((5, 4), -np.inf)
        rows[:, 0] = 0.0
        assert estimate_mi(rows, np.zeros(5, dtype=int)) == 2.0
        true = np.array([0, 1, 2, 3, 2, 1])
        peaked = gen_apriori_llrs(2.0, true)
        assert estimate_mi(peaked, true) == 2.0

    def test_row_shift_invariance(self):
        rng = np.random.default_rng(3)
        llrs = rng.normal(0, 4, (50, 4))
        true = rng.integers(0, 4, 50)
        shifted = llrs + rng.normal(0, 10, (50, 1))
        assert np.isclose(estimate_mi(llrs, true),
                          estimate_mi(shifted, true), atol=1e-10)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_never_exceeds_two(self, seed):
        rng = np.random.default_rng(seed)
        llrs = rng.normal(0, 20, (17, 4))
        true = rng.integers(0, 4, 17)
        assert estimate_mi(llrs, true) <= 2.0 + 1e-12

    def test_matches_analytic_qpsk_mi(self):
        # true posterior LLRs of QPSK over AWGN; independent 2-D quadrature
        snr_db = 5.0
        sigma_w2 = snr_to_sigma(snr_db, 1)
        rng = np.random.default_rng(11)
        n = 200_000
        true = rng.integers(0, 4, n)
        x = QPSK_SYMBOLS[true]
        y = x + rng.normal(0, np.sqrt(sigma_w2), n) \
              + 1j * rng.normal(0, np.sqrt(sigma_w2), n)
        d2 = np.abs(y[:, None] - QPSK_SYMBOLS) ** 2
        llrs = (d2[:, :1] - d2) / (2 * sigma_w2)
        assert np.isclose(estimate_mi(llrs, true), ref_qpsk_mi(sigma_w2), atol=0.02)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            estimate_mi(np.zeros((0, 4)), np.zeros(0, dtype=int))
        with pytest.raises(ValueError):
            estimate_mi(np.zeros((3, 5)), np.zeros(3, dtype=int))
        with pytest.raises(ValueError):
            estimate_mi(np.zeros((3, 4)), np.array([0, 1, 4]))
        with pytest.raises(ValueError):
            estimate_mi(np.zeros((3, 4)), np.zeros(2, dtype=int))


class TestGaussianPriorModel:
    def test_mi_against_quadrature_oracle(self):
        for s in (0.3, 1.0, 2.2, 4.0):
            assert np.isclose(binary_gaussian_mi(s), ref_binary_mi(s), atol=1e-7)
        assert binary_gaussian_mi(0.0) == 0.0

    def test_inversion_round_trip(self):
        for target in (0.05, 0.25, 0.5, 0.75, 0.95):
            s = spread_for_binary_mi(target)
            assert np.isclose(ref_binary_mi(s), target, atol=1e-7)
        assert spread_for_binary_mi(0.0) == 0.0

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            spread_for_binary_mi(-0.01)
        with pytest.raises(ValueError):
            spread_for_binary_mi(1.0)
        with pytest.raises(ValueError):
            binary_gaussian_mi(-1.0)


class TestAprioriGenerator:
    def test_target_zero_is_exactly_uniform(self):
        out = gen_apriori_llrs(0.0, np.array([1, 3, 2]), seed=0)
        assert np.all(out == 0.0)

    def test_target_two_peaks_at_truth(self):
        true = np.array([0, 1, 2, 3])
        out = gen_apriori_llrs(2.0, true, seed=0)
        assert np.array_equal(np.argmax(out, axis=1), true)
        assert np.all(out[:, 0] == 0.0)

    def test_near_perfect_target(self):
        rng = np.random.default_rng(5)
        true = rng.integers(0, 4, 100_000)
        out = gen_apriori_llrs(2.0 - 1e-9, true, seed=6)
        assert estimate_mi(out, true) > 1.99

    def test_closed_loop_at_half_grid(self):
        rng = np.random.default_rng(7)
        true = rng.integers(0, 4, 100_000)
        for target in (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75):
            got = estimate_mi(gen_apriori_llrs(target, true, seed=8), true)
            assert abs(got - target) <= 0.03, (target, got)

    def test_closed_loop_at_unit_target(self):
        rng = np.random.default_rng(9)
        true = rng.integers(0, 4, 100_000)
        got = estimate_mi(gen_apriori_llrs(1.0, true, seed=10), true)
        assert abs(got - 1.0) <= 0.02

    def test_component_zero_normalized(self):
        out = gen_apriori_llrs(0.8, np.array([2, 0, 3, 1, 1]), seed=1)
        assert np.all(out[:, 0] == 0.0)

    def test_deterministic_under_seed(self):
        true = np.array([0, 2, 1])
        a = gen_apriori_llrs(0.6, true, seed=4)
        b = gen_apriori_llrs(0.6, true, seed=4)
        assert np.array_equal(a, b)

    def test_rejects_bad_targets(self):
        with pytest.raises(ValueError):
            gen_apriori_llrs(-0.1, np.array([0]), seed=0)
        with pytest.raises(ValueError):
            gen_apriori_llrs(2.1, np.array([0]), seed=0)


@pytest.fixture(scope="module")
def curves():
    grid = np.array([0.0, 0.5, 1.0, 1.5, 2.0])
    return {
        code: etcmd_transfer_curve(code, grid, length=2000, num_blocks=2, seed=0)
        for code in (FOUR_STATE, TWO_STATE)
    }


class TestDecoderCurve:
    def test_no_information_fixed_point(self, curves):
        for c in curves.values():
            assert c.i_out[0] <= 0.02

    def test_perfect_priors_decode_perfectly(self, curves):
        for c in curves.values():
            assert c.i_out[-1] == 2.0

    def test_monotone_within_tolerance(self, curves):
        for c in curves.values():
            assert np.all(np.diff(c.i_out) >= -0.02)

    def test_four_state_is_steeper(self, curves):
        # the stronger code trades a slower start for earlier saturation
        four, two = curves[FOUR_STATE], curves[TWO_STATE]
        assert four.interp(0.5) < two.interp(0.5)
        assert four.interp(1.5) > two.interp(1.5)

    def test_metadata(self, curves):
        c = curves[FOUR_STATE]
        assert c.kind == "etcmd" and c.code == FOUR_STATE
        assert c.num_streams is None and c.snr_db is None


class TestDetectorCurve:
    def test_single_stream_curve_is_flat_at_channel_mi(self):
        grid = np.array([0.0, 1.0, 2.0])
        c = emsd_transfer_curve(1, 5.0, grid, length=20_000, num_blocks=2, seed=0)
        assert np.max(c.i_out) - np.min(c.i_out) < 1e-6
        assert abs(c.i_out[0] - ref_qpsk_mi(snr_to_sigma(5.0, 1))) < 0.03

    def test_perfect_priors_reduce_to_single_stream(self):
        # equal sigma_w2: aggregate SNR differs by 10*log10(K)
        grid = np.array([0.0, 1.0, 2.0])
        one = emsd_transfer_curve(1, 5.0, grid, length=20_000, num_blocks=2, seed=1)
        two = emsd_transfer_curve(2, 5.0 + 10 * np.log10(2), grid,
                                  length=20_000, num_blocks=2, seed=2)
        assert abs(two.i_out[-1] - one.i_out[0]) < 0.03

    def test_monotone_and_in_range(self):
        grid = np.linspace(0.0, 2.0, 9)
        c = emsd_transfer_curve(2, 8.0, grid, length=4800, num_blocks=2, seed=3)
        assert np.all(np.diff(c.i_out) >= -0.02)
        assert np.all((c.i_out >= 0.0) & (c.i_out <= 2.0))
        assert c.kind == "emsd" and c.num_streams == 2 and c.snr_db == 8.0


class TestChartIteration:
    def test_fixed_point_of_linear_charts(self):
        # e(x) = 0.4 + 0.3x, d(y) = y/2  =>  x* = 0.2/0.85
        emsd = ExitCurve("emsd", np.array([0.0, 2.0]), np.array([0.4, 1.0]))
        etcmd = ExitCurve("etcmd", np.array([0.0, 2.0]), np.array([0.0, 1.0]))
        got = chart_fixed_point(emsd, etcmd)
        assert np.isclose(got, 0.2 / 0.85, atol=1e-5)

    def test_curve_validation(self):
        with pytest.raises(ValueError):
            ExitCurve("emsd", np.array([0.0, 0.0]), np.array([0.0, 1.0]))
        with pytest.raises(ValueError):
            ExitCurve("emsd", np.array([0.0, 2.0]), np.array([0.0, 2.5]))
        with pytest.raises(ValueError):
            ExitCurve("emsd", np.array([2.0, 0.0]), np.array([0.0, 1.0]))
