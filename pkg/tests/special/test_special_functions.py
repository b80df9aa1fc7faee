"""
Special functions - incomplete gamma, ₂F₁ on the negative axis and the Ψ kernel

scipy's own routines and direct quadrature serve as oracles.
"""

import math

import numpy as np
import pytest
from scipy import integrate, special

from u2u_underlay.errors import NumericalError
from u2u_underlay.special import (
    PsiArgs,
    annulus_interference,
    gauss_2f1_neg,
    lower_incomplete_gamma,
    psi,
    psi_at_origin,
    psi_difference,
    psi_kernel,
)

ALPHA = 3.2
HEIGHT = 75.0
LOAD = 1e7


def averaged_annulus(load: float, r_lo: float, r_hi: float, h: float, alpha: float, m: int) -> float:
    """E_ψ ∫ (1 − e^{−load·ψ·d^{−α}}) r dr by adaptive quadrature."""

    def integrand(r: float) -> float:
        mu = load / (r * r + h * h) ** (alpha / 2.0)
        return (1.0 - (m / (m + mu)) ** m) * r

    value, _ = integrate.quad(integrand, r_lo, r_hi, epsabs=0.0, epsrel=1e-11, limit=500)
    return value


class TestLowerIncompleteGamma:
    """γ(a, x) for 0 < a < 1."""

    @pytest.mark.parametrize("a,x", [(0.3, 0.01), (0.5, 1.0), (0.9, 25.0), (0.2, 3.0)])
    def test_matches_integral_1e_10(self, a: float, x: float) -> None:
        """Test: Does γ(a, x) match the defining integral?"""
        # t = v^{1/a} removes the endpoint singularity: γ(a, x) = ∫_0^{x^a} e^{−v^{1/a}} dv / a
        value, _ = integrate.quad(lambda v: math.exp(-(v ** (1.0 / a))), 0.0, x**a, epsabs=0.0, epsrel=1e-12)
        assert lower_incomplete_gamma(a, x) == pytest.approx(value / a, rel=1e-10)

    def test_infinite_argument_is_gamma(self) -> None:
        """Test: Is γ(a, ∞) = Γ(a)?"""
        assert lower_incomplete_gamma(0.4, math.inf) == pytest.approx(special.gamma(0.4))

    def test_parameter_range(self) -> None:
        """Test: Are a outside (0, 1) and negative x rejected?"""
        with pytest.raises(ValueError, match="0 < a < 1"):
            lower_incomplete_gamma(1.5, 1.0)
        with pytest.raises(ValueError, match="x >= 0"):
            lower_incomplete_gamma(0.5, -1.0)


class TestGaussHypergeometric:
    """₂F₁(a, b; c; z) for z ≤ 0."""

    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_hyp2f1_matches_scipy_1e_8(self, m: int) -> None:
        """Test: Does the Ψ-family ₂F₁ agree with scipy across six decades of |z|?"""
        beta = 2.0 / ALPHA
        z = -np.logspace(-3, 6, 40)
        ours = np.asarray(gauss_2f1_neg(1.0 + m, 1.0 - beta, 2.0 - beta, z))
        reference = special.hyp2f1(1.0 + m, 1.0 - beta, 2.0 - beta, z)
        np.testing.assert_allclose(ours, reference, rtol=1e-8)

    def test_zero_argument(self) -> None:
        """Test: Is ₂F₁(a, b; c; 0) = 1?"""
        assert gauss_2f1_neg(2.0, 0.4, 1.4, 0.0) == 1.0

    def test_logarithm_1e_11(self) -> None:
        """Test: Is ₂F₁(1, 1; 2; −1) = ln 2 and ₂F₁(1, 1; 2; −z) = ln(1 + z)/z?"""
        assert gauss_2f1_neg(1.0, 1.0, 2.0, -1.0) == pytest.approx(math.log(2.0), rel=1e-11)
        z = np.array([0.01, 0.5, 3.0])
        np.testing.assert_allclose(gauss_2f1_neg(1.0, 1.0, 2.0, -z), np.log1p(z) / z, rtol=1e-11)

    def test_incomplete_beta_form_1e_10(self) -> None:
        """Test: Does the connection branch match ₂F₁(a, b; b+1; z) = ∫_0^1 (1 − z x^{1/b})^{−a} dx?"""
        a, b, z = 4.0, 0.2, -50.0
        expected, _ = integrate.quad(
            lambda x: (1.0 - z * x ** (1.0 / b)) ** (-a), 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=200
        )
        value, info = gauss_2f1_neg(a, b, b + 1.0, z, full_output=True)

        assert info["connection_points"] == 1
        assert value == pytest.approx(expected, rel=1e-10)

    def test_connection_branch_reported(self) -> None:
        """Test: Do large |z| points take the connection branch?"""
        _, info = gauss_2f1_neg(2.0, 0.375, 1.375, np.array([-0.5, -1e4]), full_output=True)
        assert info["connection_points"] == 1
        assert info["terms"] > 0

    def test_domain_checks(self) -> None:
        """Test: Are z > 0 and c ≤ b rejected?"""
        with pytest.raises(ValueError, match="z <= 0"):
            gauss_2f1_neg(2.0, 0.4, 1.4, 0.5)
        with pytest.raises(ValueError, match="c > b"):
            gauss_2f1_neg(2.0, 0.4, 0.3, -1.0)

    def test_numerical_error_carries_diagnostics(self) -> None:
        """Test: Does NumericalError keep its keyword diagnostics?"""
        error = NumericalError("did not converge", terms_used=10)
        assert error.diagnostics == {"terms_used": 10}
        assert isinstance(error, ArithmeticError)


class TestPsiKernel:
    """Annulus kernel Ψ(s, r) under Nakagami-m fading."""

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_annulus_difference_matches_quadrature_1e_8(self, m: int) -> None:
        """Test: Does Ψ(hi) − Ψ(lo) equal the fading-averaged annulus integral?"""
        r_lo, r_hi = 100.0, 2000.0
        values = np.asarray(psi(LOAD, np.array([r_lo, r_hi]), HEIGHT, ALPHA, m))
        expected = averaged_annulus(LOAD, r_lo, r_hi, HEIGHT, ALPHA, m)

        assert values[1] - values[0] == pytest.approx(expected, rel=1e-8)

    def test_tail_matches_quadrature_1e_8(self) -> None:
        """Test: Is −Ψ(r) the tail integral from r to infinity?"""
        r = 500.0
        expected = averaged_annulus(LOAD, r, math.inf, HEIGHT, ALPHA, 1)
        assert -psi(LOAD, r, HEIGHT, ALPHA, 1) == pytest.approx(expected, rel=1e-8)

    def test_vanishes_at_infinity_and_zero_load(self) -> None:
        """Test: Is Ψ(∞) = 0 and Ψ at zero load 0?"""
        assert psi(LOAD, math.inf, HEIGHT, ALPHA, 1) == 0.0
        assert psi(0.0, 100.0, HEIGHT, ALPHA, 2) == 0.0

    def test_monotone_in_radius(self) -> None:
        """Test: Does Ψ increase towards 0 as r grows?"""
        r = np.linspace(0.0, 5000.0, 60)
        values = np.asarray(psi(LOAD, r, HEIGHT, ALPHA, 2))
        assert np.all(values <= 0.0)
        assert np.all(np.diff(values) > 0.0)

    def test_origin_limit(self) -> None:
        """Test: Does the co-planar origin limit match Ψ at a tiny radius?"""
        at_origin = psi_at_origin(LOAD, ALPHA, 2)
        nearby = psi(LOAD, 1e-3, 0.0, ALPHA, 2)
        assert nearby == pytest.approx(at_origin, rel=1e-6)
        assert psi(LOAD, 0.0, 0.0, ALPHA, 2) == pytest.approx(at_origin)

    def test_depends_only_on_load(self) -> None:
        """Test: Do (s, P) pairs with the same product give the same Ψ?"""
        a = psi_kernel(PsiArgs(s=1e9, r=300.0, h=HEIGHT, m=1, beta=2.0 / ALPHA, power=1e-2))
        b = psi_kernel(PsiArgs(s=1e8, r=300.0, h=HEIGHT, m=1, beta=2.0 / ALPHA, power=1e-1))
        assert a == pytest.approx(b, rel=1e-14)

    def test_continuous_where_saturation_starts(self) -> None:
        """Test: Do the saturated and closed-form expressions meet at μ = m?"""
        for m in (1, 3):
            split = (LOAD / m) ** (2.0 / ALPHA) - HEIGHT**2
            r = math.sqrt(split) * np.array([1.0 - 1e-9, 1.0 + 1e-9])
            below, above = np.asarray(psi(LOAD, r, HEIGHT, ALPHA, m))
            assert below == pytest.approx(above, rel=1e-8), f"m = {m}"

    def test_requires_alpha_above_two(self) -> None:
        """Test: Is α ≤ 2 rejected?"""
        with pytest.raises(ValueError, match="alpha > 2"):
            psi(LOAD, 100.0, HEIGHT, 2.0, 1)
        with pytest.raises(ValueError, match="beta"):
            PsiArgs(s=1.0, r=1.0, h=0.0, m=1, beta=1.0, power=1.0)


class TestPsiDifference:
    """Annulus increments Ψ(hi) − Ψ(lo) at loads where both values saturate."""

    R_LO, R_HI, ALPHA_FLAT = 816.5, 898.15, 2.2

    @pytest.mark.parametrize("m", [1, 2])
    @pytest.mark.parametrize("load", [1e9, 1e13, 1e15, 1e19, 1e21, 1e23, 1e25])
    def test_heavy_load_cell_matches_quadrature_1e_9(self, load: float, m: int) -> None:
        """Test: Does a grid cell keep nine digits while the interferers saturate it?"""
        expected = averaged_annulus(load, self.R_LO, self.R_HI, 0.0, self.ALPHA_FLAT, m)
        value = psi_difference(load, self.R_LO, self.R_HI, 0.0, self.ALPHA_FLAT, m)
        assert value == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_cell_straddling_saturation_1e_9(self, m: int) -> None:
        """Test: Is a cell cut by μ = m handled as two parts that add up?"""
        load = m * 850.0**self.ALPHA_FLAT
        expected = averaged_annulus(load, self.R_LO, self.R_HI, 0.0, self.ALPHA_FLAT, m)
        value = psi_difference(load, self.R_LO, self.R_HI, 0.0, self.ALPHA_FLAT, m)
        assert value == pytest.approx(expected, rel=1e-9)

    def test_agrees_with_psi_values_at_moderate_load_1e_9(self) -> None:
        """Test: Where no cancellation occurs, is the increment the plain difference of Ψ?"""
        edges = np.array([0.0, 100.0, 400.0, 2000.0])
        values = np.asarray(psi(LOAD, edges, HEIGHT, ALPHA, 2))
        increments = psi_difference(LOAD, edges[:-1], edges[1:], HEIGHT, ALPHA, 2)
        np.testing.assert_allclose(increments, np.diff(values), rtol=1e-9)

    def test_tail_to_infinity(self) -> None:
        """Test: Is an infinite outer edge the tail −Ψ(lo)?"""
        value = psi_difference(LOAD, 500.0, math.inf, HEIGHT, ALPHA, 1)
        assert value == pytest.approx(-psi(LOAD, 500.0, HEIGHT, ALPHA, 1), rel=1e-12)

    def test_non_negative_and_monotone_in_load(self) -> None:
        """Test: Does a fixed cell's increment stay positive and grow with the load up to its area?"""
        loads = np.logspace(-4.0, 30.0, 35 * 24)
        values = np.asarray(psi_difference(loads, self.R_LO, self.R_HI, 0.0, self.ALPHA_FLAT, 1))
        area = 0.5 * (self.R_HI**2 - self.R_LO**2)

        assert np.all(values > 0.0)
        assert np.all(np.diff(values) >= -1e-12 * area)
        assert values[-1] == pytest.approx(area, rel=1e-12)
        assert np.all(values <= area * (1.0 + 1e-12))

    def test_empty_cells_and_zero_load(self) -> None:
        """Test: Do zero loads and empty or reversed cells give 0?"""
        values = psi_difference(
            np.array([0.0, LOAD, LOAD]), np.array([1.0, 5.0, 9.0]), np.array([2.0, 5.0, 3.0]), HEIGHT, ALPHA, 2
        )
        np.testing.assert_array_equal(values, 0.0)


class TestAnnulusInterference:
    """Closed form for a fixed fading gain."""

    def test_matches_quadrature_1e_8(self) -> None:
        """Test: Does the incomplete-gamma form match direct quadrature?"""
        r_lo, r_hi = 150.0, 3000.0

        def integrand(r: float) -> float:
            return -math.expm1(-LOAD / (r * r + HEIGHT**2) ** (ALPHA / 2.0)) * r

        expected, _ = integrate.quad(integrand, r_lo, r_hi, epsrel=1e-11, limit=500)
        value = annulus_interference(LOAD, r_lo, r_hi, HEIGHT, ALPHA)
        assert value == pytest.approx(expected, rel=1e-8)

    def test_bounds_faded_annulus(self) -> None:
        """Test: Is the unfaded integral an upper bound for Rayleigh fading?"""
        r_lo, r_hi = 150.0, 3000.0
        faded = np.asarray(psi(LOAD, np.array([r_lo, r_hi]), HEIGHT, ALPHA, 1))
        bound = annulus_interference(LOAD, r_lo, r_hi, HEIGHT, ALPHA)
        assert bound >= faded[1] - faded[0]

    def test_to_infinity(self) -> None:
        """Test: Is an infinite outer radius allowed?"""
        finite = annulus_interference(LOAD, 200.0, 1e7, HEIGHT, ALPHA)
        infinite = annulus_interference(LOAD, 200.0, math.inf, HEIGHT, ALPHA)
        assert infinite == pytest.approx(finite, rel=1e-5)
