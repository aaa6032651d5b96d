import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamoutage import (
    AntennaConfig,
    BeamWraparoundError,
    Covariance2x2,
    InvalidModelError,
    LinkConfig,
    OutageEstimate,
    OutageRegime,
    PositioningErrorModel,
    RegimeKind,
    WrongRegimeError,
    classify,
    covariance_from_model,
    estimate_outage,
    friis_gain,
    k_factor,
    outage_bounds,
    q_function,
    spectral_sqrt,
    tightness_ratio,
)

ANT = AntennaConfig(theta_3db=0.1, a_m=1e-4, p_max=100.0)
LINK30 = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-7)

# wedge slope for the configuration above, frozen from a 40-digit
# evaluation of tan(sqrt(theta_3db^2/1.2 * log10(margin)))
K_AT_30 = 0.10222295079496930235


def random_cov(rng):
    s2 = rng.uniform(0.2, 2.0)
    s1 = s2 * rng.uniform(1.0, 5.0)
    phi = rng.uniform(0.0, math.pi)
    return covariance_from_model(PositioningErrorModel(s1, s2, phi))


class TestClassify:
    def test_probabilistic_with_frozen_slope(self):
        regime = classify(ANT, LINK30)
        assert regime.kind is RegimeKind.PROBABILISTIC
        assert regime.is_probabilistic
        assert not regime.wraparound
        assert regime.k == pytest.approx(K_AT_30, rel=1e-14)

    def test_floor_coverage_with_boundary_equality(self):
        # threshold set exactly to the floor power: still covered
        bore = ANT.p_max * friis_gain(LINK30)
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=ANT.a_m * bore)
        regime = classify(ANT, link)
        assert regime.kind is RegimeKind.ALWAYS_COVERED
        assert regime.k is None and not regime.wraparound

    def test_outage_with_boundary_equality(self):
        # threshold set exactly to the boresight power: already outage
        bore = ANT.p_max * friis_gain(LINK30)
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=bore)
        regime = classify(ANT, link)
        assert regime.kind is RegimeKind.ALWAYS_OUTAGE
        assert regime.k is None

    def test_outage_below_boresight(self):
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-2)
        assert classify(ANT, link).kind is RegimeKind.ALWAYS_OUTAGE

    def test_wraparound_coverage(self):
        # wide beam with a generous margin: the coverage half-angle
        # passes pi/2 before the floor is consulted
        ant = AntennaConfig(theta_3db=3.0, a_m=1e-12, p_max=1e4)
        link = LinkConfig(d=1.0, wavelength=0.5, gamma_th=1e-9)
        regime = classify(ant, link)
        assert regime.kind is RegimeKind.ALWAYS_COVERED
        assert regime.wraparound
        assert regime.k is None

    def test_k_factor_matches_classify(self):
        assert k_factor(ANT, LINK30) == classify(ANT, LINK30).k

    def test_k_factor_wrong_regime(self):
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-2)
        with pytest.raises(WrongRegimeError):
            k_factor(ANT, link)

    def test_k_factor_wraparound(self):
        ant = AntennaConfig(theta_3db=3.0, a_m=1e-12, p_max=1e4)
        link = LinkConfig(d=1.0, wavelength=0.5, gamma_th=1e-9)
        with pytest.raises(BeamWraparoundError):
            k_factor(ant, link)


class TestBounds:
    def test_components_match_direct_evaluation(self):
        cov = covariance_from_model(PositioningErrorModel(1.0, 0.5, math.pi / 4))
        est = outage_bounds(K_AT_30, 30.0, cov)
        q_r = cov.quad_form(1.0, -K_AT_30)
        q_l = cov.quad_form(1.0, K_AT_30)
        assert est.i_r == q_function(K_AT_30 * 30.0 / math.sqrt(q_r))
        assert est.i_l == q_function(K_AT_30 * 30.0 / math.sqrt(q_l))
        assert est.i_b == q_function(30.0 / math.sqrt(cov.r22))
        assert est.upper == min(1.0, est.i_r + est.i_l)
        assert est.lower == max(0.0, est.i_r + est.i_l - est.i_b)
        assert est.regime.kind is RegimeKind.PROBABILISTIC

    def test_invalid_inputs(self):
        cov = Covariance2x2(1.0, 0.0, 1.0)
        with pytest.raises(InvalidModelError):
            outage_bounds(0.0, 1.0, cov)
        with pytest.raises(InvalidModelError):
            outage_bounds(1.0, 0.0, cov)
        with pytest.raises(InvalidModelError):
            outage_bounds(math.nan, 1.0, cov)

    def test_estimate_validation(self):
        with pytest.raises(InvalidModelError):
            OutageEstimate(
                regime=OutageRegime(RegimeKind.PROBABILISTIC, k=1.0),
                lower=0.7,
                upper=0.3,
            )

    @given(
        st.floats(min_value=0.01, max_value=50.0),
        st.floats(min_value=0.1, max_value=200.0),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    @settings(max_examples=300)
    def test_ordering_and_gap(self, k, d, seed):
        cov = random_cov(np.random.default_rng(seed))
        est = outage_bounds(k, d, cov)
        assert 0.0 <= est.lower <= est.upper <= 1.0
        gap = est.upper - est.lower
        # gap == i_b up to the rounding of (i_r + i_l) - i_b, which is
        # at the ulp of the total when the components are lopsided
        assert gap <= est.i_b + 8.0 * math.ulp(est.upper)

    @given(
        st.floats(min_value=0.01, max_value=50.0),
        st.floats(min_value=0.1, max_value=200.0),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    @settings(max_examples=300)
    def test_lower_clamp_never_binds(self, k, d, seed):
        # i_r + i_l >= i_b holds identically: the half-plane whose
        # quadratic form stays below k^2 r22 contributes at least i_b.
        # Skip the subnormal range where erfc rounding can perturb the
        # ordering by a few 5e-324 ulps.
        cov = random_cov(np.random.default_rng(seed))
        est = outage_bounds(k, d, cov)
        if est.i_b == 0.0 or est.i_b >= 1e-290:
            assert est.i_r + est.i_l >= est.i_b
            assert est.lower == est.i_r + est.i_l - est.i_b

    def test_deep_tail_bounds_stay_representable(self):
        # far-away receiver: probabilities sit around 1e-80 yet the
        # sandwich keeps its ordering instead of collapsing to zero
        cov = covariance_from_model(PositioningErrorModel(1.0, 0.5, 0.0))
        est = outage_bounds(0.06, 320.0, cov)
        assert 0.0 < est.lower <= est.upper < 1e-70


class TestQRatioLimits:
    @pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0])
    def test_steeper_tail_ratio_decreases(self, alpha):
        ts = [2.0, 4.0, 6.0, 8.0]
        ratios = [q_function(alpha * t) / q_function(t) for t in ts]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))

    def test_shallower_tail_ratio_increases(self):
        ts = [2.0, 4.0, 6.0, 8.0]
        ratios = [q_function(0.9 * t) / q_function(t) for t in ts]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))


class TestQuadraticFormGeometry:
    def test_wider_halfplane_form_dominates_range_variance(self):
        # evaluated through the covariance square root's rows, as an
        # independent route to the quadratic forms
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            cov = random_cov(rng)
            k = float(10.0 ** rng.uniform(-3.0, 2.0))
            root = spectral_sqrt(cov)
            v_r = np.array([1.0, -k])
            v_l = np.array([1.0, k])
            q_r = float((root @ v_r) @ (root @ v_r))
            q_l = float((root @ v_l) @ (root @ v_l))
            assert q_r == pytest.approx(cov.quad_form(1.0, -k), rel=1e-11)
            assert q_l == pytest.approx(cov.quad_form(1.0, k), rel=1e-11)
            assert max(q_r, q_l) > k * k * cov.r22

    def test_q_arguments_increase_with_k_where_defined(self):
        # kd/sqrt(q) grows in k exactly while k |r12| < r11; the upper
        # bound then shrinks.  (Beyond that domain the argument of the
        # correlated half-plane can genuinely decrease.)
        rng = np.random.default_rng(99)
        d = 10.0
        checked = 0
        while checked < 500:
            cov = random_cov(rng)
            k_top = cov.r11 / (abs(cov.r12) + 1e-12)
            k = float(10.0 ** rng.uniform(-3.0, 1.0))
            if k * 1.01 >= k_top:
                continue
            checked += 1
            for sign in (-1.0, 1.0):
                z1 = k * d / math.sqrt(cov.quad_form(1.0, sign * k))
                z2 = k * 1.01 * d / math.sqrt(cov.quad_form(1.0, sign * k * 1.01))
                assert z2 > z1
            up1 = outage_bounds(k, d, cov).upper
            up2 = outage_bounds(k * 1.01, d, cov).upper
            assert up2 <= up1

    def test_q_argument_can_decrease_beyond_domain(self):
        # counterexample documenting why the domain restriction above
        # is necessary: strong correlation, slope past r11/|r12|
        cov = Covariance2x2(1.0, 9.0, 100.0)
        d = 5.0
        z1 = 1.0 * d / math.sqrt(cov.quad_form(1.0, -1.0))
        z2 = 1.1 * d / math.sqrt(cov.quad_form(1.0, -1.1))
        assert z2 < z1


class TestTightness:
    def test_ratio_decreases_with_distance(self):
        cov = Covariance2x2(1.0, 0.0, 1.0)
        ratios = [tightness_ratio(1.0, d, cov) for d in (5.0, 10.0, 20.0, 40.0)]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] < 1e-3

    def test_ratio_decreases_with_shrinking_covariance(self):
        base = Covariance2x2(1.0, 0.3, 0.8)
        ratios = [
            tightness_ratio(0.7, 6.0, base.scaled(f)) for f in (1.0, 0.25, 0.0625)
        ]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert ratios[0] / ratios[-1] >= 10.0

    def test_degenerate_underflow_warns(self):
        cov = Covariance2x2(1.0, 0.0, 1.0)
        with pytest.warns(RuntimeWarning):
            r = tightness_ratio(1.0, 80.0, cov)
        assert r == 0.0

    def test_matches_bound_components(self):
        cov = Covariance2x2(2.0, -0.5, 1.0)
        est = outage_bounds(0.4, 8.0, cov)
        assert tightness_ratio(0.4, 8.0, cov) == est.i_b / (est.i_r + est.i_l)
        assert est.tightness_ratio == est.i_b / (est.i_r + est.i_l)


class TestBoundCurveShape:
    def test_interior_minimum_against_distance(self):
        # distance sweep of the upper bound: the wedge narrows at close
        # range (small margin left after the threshold) and the angular
        # error spread shrinks with distance, so the curve dips in the
        # middle before path loss pulls it back up
        cov = covariance_from_model(PositioningErrorModel(1.0, 0.5, 0.0))
        link_at = lambda d: LinkConfig(d=d, wavelength=0.05, gamma_th=1e-7)
        ds = np.linspace(5.0, 120.0, 116)
        uppers = []
        for d in ds:
            regime = classify(ANT, link_at(float(d)))
            assert regime.is_probabilistic
            uppers.append(outage_bounds(regime.k, float(d), cov).upper)
        idx = int(np.argmin(uppers))
        assert 60.0 <= ds[idx] <= 90.0
        assert uppers[idx] > 0.0  # representable, not an underflow artifact
        assert uppers[0] > uppers[idx] < uppers[-1]


class TestEstimateOutage:
    def test_probabilistic_delegates_to_bounds(self):
        cov = covariance_from_model(PositioningErrorModel(1.0, 0.5, 0.0))
        est = estimate_outage(ANT, LINK30, cov)
        ref = outage_bounds(K_AT_30, 30.0, cov)
        assert est.regime.k == pytest.approx(ref.regime.k, rel=1e-14)
        assert est.upper == pytest.approx(ref.upper, rel=1e-12)

    def test_always_outage_short_circuit(self):
        cov = Covariance2x2(1.0, 0.0, 1.0)
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-2)
        est = estimate_outage(ANT, link, cov)
        assert est.lower == est.upper == 1.0
        assert est.i_r is None and est.tightness_ratio is None

    def test_always_covered_short_circuit(self):
        cov = Covariance2x2(1.0, 0.0, 1.0)
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-20)
        est = estimate_outage(ANT, link, cov)
        assert est.lower == est.upper == 0.0
        assert est.regime.kind is RegimeKind.ALWAYS_COVERED
