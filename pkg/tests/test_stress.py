"""Stress laws, admissibility checks, characteristic transforms."""

import math

import numpy as np
import pytest
from scipy import integrate

from viscowave import (
    check_hypotheses,
    cubic_law,
    custom_law,
    linear_law,
    riemann_forward,
    riemann_inverse,
    sigma_eval,
)
from viscowave.stress import make_stress_model

# closed-form oracle for the cubic law's wave-speed primitive at v = 1:
# int_0^1 sqrt(3 s^2 + 1) ds = 1/2 * 2 + arcsinh(sqrt(3)) / (2 sqrt(3))
CUBIC_PRIMITIVE_AT_1 = 1.0 + math.asinh(math.sqrt(3.0)) / (2.0 * math.sqrt(3.0))


class TestSigmaEval:
    @pytest.mark.parametrize("v,expected", [
        (0.0, (0.0, 1.0, 0.0, 0.0)),
        (1.0, (2.0, 4.0, 6.0, 0.75)),
        (-1.0, (-2.0, 4.0, -6.0, 0.75)),
    ])
    def test_cubic_values(self, v, expected):
        got = sigma_eval(cubic_law(), v)
        assert got == pytest.approx(expected, abs=1e-15)

    def test_custom_stored_energy_matches_quadrature(self):
        # sinh is C^3 with sigma' = cosh >= 1; Sigma = cosh(v) - 1
        model = custom_law("sinh", np.sinh, np.cosh, np.sinh, np.cosh, sigma0=1.0)
        for v in (-2.0, -0.3, 0.0, 1.7):
            oracle, _ = integrate.quad(np.sinh, 0.0, v)
            assert model.stored_energy(v) == pytest.approx(oracle, abs=1e-8)

    def test_nonnormalized_law_rejected(self):
        with pytest.raises(ValueError, match="sigma\\(0\\)"):
            custom_law("shifted", lambda v: v + 1.0, lambda v: 1.0,
                       lambda v: 0.0, lambda v: 0.0, sigma0=1.0)

    def test_stored_energy_lower_bound(self):
        # Sigma(v) >= (sigma0/2) v^2 on the hyperbolic range
        model = cubic_law()
        vs = np.linspace(-10.0, 10.0, 501)
        _, _, _, stored = sigma_eval(model, vs)
        assert np.all(stored >= 0.5 * model.sigma0 * vs**2 - 1e-12)

    def test_derivative_consistency(self):
        # central difference of sigma matches sigma' to O(delta^2)
        model = cubic_law()
        rng = np.random.default_rng(5)
        delta = 1e-5
        for v in rng.uniform(-3, 3, size=20):
            fd = (model.sigma(v + delta) - model.sigma(v - delta)) / (2 * delta)
            assert fd == pytest.approx(model.dsigma(v), abs=1e-8)


class TestHypotheses:
    def test_cubic_passes_all(self):
        report = check_hypotheses(cubic_law(), -10.0, 10.0)
        assert report.all_ok
        assert abs(report.witnesses["lambda0"]) <= 1e-6

    def test_linear_fails_inflection_and_growth(self):
        report = check_hypotheses(linear_law(), -10.0, 10.0)
        assert report.h1_ok and report.h3_ok
        assert not report.h2_ok
        assert not report.h4_ok

    def test_degenerate_law_fails_lower_bound(self):
        # sigma' vanishes at v = 0
        model = custom_law(
            "degenerate",
            sigma=lambda v: np.asarray(v, float) ** 3 / 3.0,
            dsigma=lambda v: np.asarray(v, float) ** 2,
            d2sigma=lambda v: 2.0 * np.asarray(v, float),
            d3sigma=lambda v: np.full_like(np.asarray(v, float), 2.0),
            sigma0=0.5,
        )
        report = check_hypotheses(model, -2.0, 2.0)
        assert not report.h1_ok
        assert abs(report.witnesses["argmin_dsigma"]) <= 0.01

    def test_degenerate_range_rejected(self):
        with pytest.raises(ValueError, match="range"):
            check_hypotheses(cubic_law(), 1.0, 1.0)

    def test_sample_count_floor(self):
        with pytest.raises(ValueError, match="100"):
            check_hypotheses(cubic_law(), -1.0, 1.0, n_samples=50)

    def test_report_serialization(self):
        report = check_hypotheses(cubic_law(), -10.0, 10.0)
        record = report.to_record()
        assert record["h1_ok"] and record["h4_ok"]
        assert "witness_lambda0" in record
        text = report.to_text()
        assert "pass" in text and "note:" in text

    def test_builtin_lookup(self):
        assert make_stress_model("cubic").name == "cubic"
        assert make_stress_model("linear").name == "linear"
        with pytest.raises(ValueError, match="unknown stress law"):
            make_stress_model("rubber")


class TestRiemann:
    def test_zero_deformation(self):
        l, r = riemann_forward(cubic_law(), 0.0, 1.3)
        assert (l, r) == (1.3, 1.3)

    def test_cubic_closed_form(self):
        l, r = riemann_forward(cubic_law(), 1.0, 0.0)
        assert l == pytest.approx(CUBIC_PRIMITIVE_AT_1, abs=1e-12)
        assert r == pytest.approx(-CUBIC_PRIMITIVE_AT_1, abs=1e-12)

    def test_shift_by_velocity(self):
        l, r = riemann_forward(cubic_law(), 1.0, 2.0)
        assert l == pytest.approx(2.0 + CUBIC_PRIMITIVE_AT_1, abs=1e-12)
        assert r == pytest.approx(2.0 - CUBIC_PRIMITIVE_AT_1, abs=1e-12)

    def test_quadrature_path_matches_closed_form(self):
        # the same law without its closed-form primitive goes through quad
        cubic = cubic_law()
        model = custom_law("cubic-no-primitive", cubic.sigma, cubic.dsigma,
                           cubic.d2sigma, cubic.d3sigma, sigma0=1.0)
        for v, w in ((0.7, -1.0), (-2.2, 0.3)):
            assert riemann_forward(model, v, w) == pytest.approx(
                riemann_forward(cubic, v, w), abs=1e-10)

    def test_inverse_trivial(self):
        v, w = riemann_inverse(cubic_law(), 0.8, 0.8)
        assert v == 0.0 and w == 0.8

    def test_inverse_of_forward_example(self):
        v, w = riemann_inverse(cubic_law(), CUBIC_PRIMITIVE_AT_1, -CUBIC_PRIMITIVE_AT_1)
        assert v == pytest.approx(1.0, abs=1e-10)
        assert w == pytest.approx(0.0, abs=1e-14)

    def test_round_trip(self):
        model = cubic_law()
        rng = np.random.default_rng(123)
        worst = 0.0
        for v, w in rng.uniform(-5.0, 5.0, size=(200, 2)):
            l, r = riemann_forward(model, v, w)
            v2, w2 = riemann_inverse(model, l, r)
            worst = max(worst, abs(v2 - v), abs(w2 - w))
        assert worst <= 1e-10

    def test_monotone_in_deformation(self):
        model = cubic_law()
        vs = np.linspace(-4.0, 4.0, 41)
        gaps = [riemann_forward(model, v, 0.0)[0] - riemann_forward(model, v, 0.0)[1]
                for v in vs]
        assert np.all(np.diff(gaps) > 0)

    def test_inverse_rejects_malformed_model(self):
        # a law whose declared hyperbolicity floor overstates the true
        # sigma' leaves the root outside the bracket; the iteration cap
        # must surface that as an error instead of looping
        model = custom_law("overstated",
                           sigma=lambda v: 0.01 * v,
                           dsigma=lambda v: 0.01 + 0.0 * np.asarray(v, float),
                           d2sigma=lambda v: 0.0 * np.asarray(v, float),
                           d3sigma=lambda v: 0.0 * np.asarray(v, float),
                           sigma0=1.0)
        with pytest.raises(RuntimeError, match="did not converge"):
            riemann_inverse(model, 2.0, -2.0)
