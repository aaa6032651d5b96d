import math

import numpy as np
import pytest

import beamoutage.oracle as oracle_mod
from beamoutage import (
    AntennaConfig,
    Covariance2x2,
    InvalidModelError,
    LinkConfig,
    McConfig,
    OracleMethod,
    OracleResult,
    PositioningErrorModel,
    ToleranceNotMetError,
    covariance_from_model,
    k_factor,
    outage_bounds,
    outage_montecarlo,
    outage_quadrature,
    q_function,
)
from beamoutage.oracle import _normals_from_counter

ANT = AntennaConfig(theta_3db=0.1, a_m=1e-4, p_max=100.0)
LINK30 = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-7)
COV = covariance_from_model(PositioningErrorModel(1.0, 0.5, 0.0))

# frozen from a tol=1e-12 run of the conditional-decomposition quadrature
P_QUAD_REF = 0.002193566783655232


class TestResultTypes:
    def test_probability_range_enforced(self):
        with pytest.raises(InvalidModelError):
            OracleResult(p_out=1.2, std_err=0.0, method=OracleMethod.QUADRATURE)
        with pytest.raises(InvalidModelError):
            OracleResult(p_out=-0.1, std_err=0.0, method=OracleMethod.QUADRATURE)
        with pytest.raises(InvalidModelError):
            OracleResult(p_out=0.5, std_err=-1.0, method=OracleMethod.MONTE_CARLO)

    def test_mc_config_validation(self):
        with pytest.raises(InvalidModelError):
            McConfig(n_samples=0, seed=0)
        with pytest.raises(InvalidModelError):
            McConfig(n_samples=10, seed=-1)
        with pytest.raises(InvalidModelError):
            McConfig(n_samples=10, seed=0, n_streams=0)
        with pytest.raises(InvalidModelError):
            McConfig(n_samples=10.0, seed=0)

    def test_method_tags(self):
        k = k_factor(ANT, LINK30)
        assert outage_quadrature(k, 30.0, COV).method is OracleMethod.QUADRATURE
        mc = outage_montecarlo(ANT, LINK30, COV, McConfig(n_samples=64, seed=0))
        assert mc.method is OracleMethod.MONTE_CARLO


class TestQuadrature:
    def test_reference_value(self):
        k = k_factor(ANT, LINK30)
        r = outage_quadrature(k, 30.0, COV, tol=1e-10)
        assert r.p_out == pytest.approx(P_QUAD_REF, abs=2e-10)
        assert r.std_err == 0.0

    def test_sandwiched_by_closed_form(self):
        k = k_factor(ANT, LINK30)
        est = outage_bounds(k, 30.0, COV)
        p = outage_quadrature(k, 30.0, COV, tol=1e-12).p_out
        assert est.lower - 1e-12 <= p <= est.upper + 1e-12

    def test_tolerance_convergence(self):
        k = 0.25
        cov = Covariance2x2(1.5, 0.4, 0.9)
        loose = outage_quadrature(k, 12.0, cov, tol=1e-6).p_out
        tight = outage_quadrature(k, 12.0, cov, tol=1e-12).p_out
        assert abs(loose - tight) <= 2e-6

    def test_monotone_in_distance(self):
        # fixed wedge, mean pushed deeper inside: outage mass shrinks
        cov = Covariance2x2(1.0, 0.2, 0.6)
        ps = [outage_quadrature(0.3, d, cov, tol=1e-12).p_out for d in (3.0, 5.0, 8.0, 12.0)]
        assert all(a > b for a, b in zip(ps, ps[1:]))

    def test_wide_wedge_approaches_halfplane(self):
        # k -> inf covers all of y > 0; outage collapses to the range
        # tail probability Q(d / sigma_y)
        p = outage_quadrature(1e3, 5.0, Covariance2x2(1.0, 0.0, 1.0), tol=1e-12).p_out
        assert p == pytest.approx(q_function(5.0), rel=1e-3)

    def test_zero_distance_wedge_mass(self):
        # estimate centred on the transmitter: P(miss) is the angular
        # complement of the wedge, 3/4 for k = 1 under isotropic error
        p = outage_quadrature(1.0, 0.0, Covariance2x2(1.0, 0.0, 1.0), tol=1e-10).p_out
        assert p == pytest.approx(0.75, abs=1e-9)

    @pytest.mark.parametrize(
        "k,d,tol",
        [
            (0.0, 1.0, 1e-10),
            (-1.0, 1.0, 1e-10),
            (math.inf, 1.0, 1e-10),
            (1.0, -1.0, 1e-10),
            (1.0, math.nan, 1e-10),
            (1.0, 1.0, 1e-14),
            (1.0, 1.0, 1e-4),
            (1.0, 1.0, 5e-15),
            (1.0, 1.0, 2e-4),
        ],
    )
    def test_input_validation(self, k, d, tol):
        with pytest.raises(InvalidModelError):
            outage_quadrature(k, d, Covariance2x2(1.0, 0.0, 1.0), tol=tol)

    def test_uncertifiable_error_raises(self, monkeypatch):
        monkeypatch.setattr(oracle_mod, "quad", lambda *a, **kw: (0.5, 1.0))
        with pytest.raises(ToleranceNotMetError):
            outage_quadrature(1.0, 5.0, Covariance2x2(1.0, 0.0, 1.0))


class TestCounterStream:
    def test_split_equals_whole(self):
        whole = _normals_from_counter(11, 0, 10)
        parts = np.concatenate(
            [_normals_from_counter(11, 0, 4), _normals_from_counter(11, 4, 6)]
        )
        assert np.array_equal(whole, parts)

    def test_seed_changes_stream(self):
        assert not np.array_equal(
            _normals_from_counter(0, 0, 8), _normals_from_counter(1, 0, 8)
        )

    def test_moments(self):
        z = _normals_from_counter(5, 0, 200_000)
        assert z.shape == (200_000, 2)
        assert np.abs(z.mean(axis=0)).max() < 0.01
        assert np.abs(z.var(axis=0) - 1.0).max() < 0.02
        assert abs(np.mean(z[:, 0] * z[:, 1])) < 0.01


class TestMonteCarlo:
    def test_deterministic_given_seed(self):
        mc = McConfig(n_samples=20_000, seed=42)
        a = outage_montecarlo(ANT, LINK30, COV, mc)
        b = outage_montecarlo(ANT, LINK30, COV, mc)
        assert a.p_out == b.p_out and a.std_err == b.std_err

    @pytest.mark.parametrize("n", [4096, 10_001])
    def test_partition_invariance(self, n):
        ps = {
            outage_montecarlo(
                ANT, LINK30, COV, McConfig(n_samples=n, seed=3, n_streams=s)
            ).p_out
            for s in (1, 2, 3, 7)
        }
        assert len(ps) == 1

    def test_always_outage_counts_every_draw(self):
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-2)
        r = outage_montecarlo(ANT, link, COV, McConfig(n_samples=2000, seed=0))
        assert r.p_out == 1.0 and r.std_err == 0.0

    def test_floor_coverage_counts_no_draw(self):
        link = LinkConfig(d=30.0, wavelength=0.05, gamma_th=1e-20)
        r = outage_montecarlo(ANT, link, COV, McConfig(n_samples=2000, seed=0))
        assert r.p_out == 0.0 and r.std_err == 0.0

    def test_agrees_with_quadrature(self):
        mc = outage_montecarlo(ANT, LINK30, COV, McConfig(n_samples=200_000, seed=7))
        assert mc.std_err > 0.0
        assert abs(mc.p_out - P_QUAD_REF) <= 4.0 * mc.std_err

    def test_std_err_is_binomial(self):
        r = outage_montecarlo(ANT, LINK30, COV, McConfig(n_samples=20_000, seed=1))
        n = 20_000
        count = round(r.p_out * n)
        p = count / n
        assert r.p_out == p
        assert r.std_err == math.sqrt(p * (1.0 - p) / n)
