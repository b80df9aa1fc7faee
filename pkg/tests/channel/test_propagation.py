"""
Channel - geometry, BS antenna pattern, path loss, fading and power control
"""

import math

import numpy as np
import pytest
from scipy import stats

from u2u_underlay.channel.antenna import array_factor, bs_antenna_gain, element_gain
from u2u_underlay.channel.geometry import LinkGeometry, zenith_angle_at_bs
from u2u_underlay.channel.propagation import (
    fading_cdf,
    large_scale_fading,
    path_loss,
    sample_fading,
    transmit_power,
)
from u2u_underlay.scenario.params import (
    AntennaParams,
    Condition,
    LinkClass,
    LinkType,
    NodeRole,
    PowerControlParams,
)


@pytest.fixture
def antenna() -> AntennaParams:
    return AntennaParams()


class TestGeometry:
    """Distances and zenith angles."""

    def test_three_dimensional_distance(self) -> None:
        """Test: Is d_3d the hypotenuse of r_2d and the height difference?"""
        assert LinkGeometry(400.0, 325.0, 25.0).d_3d == pytest.approx(500.0)

    def test_zenith_angle_above_and_below(self) -> None:
        """Test: Is a node straight above the BS at θ = 0 and below at θ = π?"""
        above = zenith_angle_at_bs(LinkGeometry(0.0, 100.0, 25.0))
        below = zenith_angle_at_bs(LinkGeometry(0.0, 1.5, 25.0))
        level = zenith_angle_at_bs(LinkGeometry(50.0, 25.0, 25.0))

        assert above == pytest.approx(0.0)
        assert below == pytest.approx(math.pi)
        assert level == pytest.approx(math.pi / 2)

    def test_co_located_nodes(self) -> None:
        """Test: Is the zenith angle undefined for co-located nodes?"""
        with pytest.raises(ValueError, match="co-located"):
            zenith_angle_at_bs(LinkGeometry(0.0, 25.0, 25.0))

    def test_negative_distance(self) -> None:
        """Test: Are negative distances rejected?"""
        with pytest.raises(ValueError, match="non-negative"):
            LinkGeometry(-1.0, 1.5, 25.0)


class TestAntenna:
    """Element directivity times array factor."""

    def test_array_factor_peaks_at_tilt(self, antenna: AntennaParams) -> None:
        """Test: Does the array factor equal N on the electrical tilt?"""
        assert array_factor(antenna.downtilt_rad, antenna) == pytest.approx(8.0)

    def test_element_gain_at_horizon(self, antenna: AntennaParams) -> None:
        """Test: Is the element gain its peak at θ = π/2?"""
        assert element_gain(math.pi / 2, antenna) == pytest.approx(10 ** 0.8)

    def test_null_overhead(self, antenna: AntennaParams) -> None:
        """Test: Is the BS gain zero straight up?"""
        assert bs_antenna_gain(0.0, antenna) == pytest.approx(0.0, abs=1e-30)

    def test_gain_bounded_by_peak(self, antenna: AntennaParams) -> None:
        """Test: Is the total gain within [0, N·g_E^max] everywhere?"""
        theta = np.linspace(0.0, math.pi, 2001)
        gain = np.asarray(bs_antenna_gain(theta, antenna))

        assert np.all(gain >= 0.0)
        assert np.all(gain <= 8.0 * antenna.element_peak_gain * (1 + 1e-12))

    def test_angle_outside_range(self, antenna: AntennaParams) -> None:
        """Test: Is an angle beyond π rejected?"""
        with pytest.raises(ValueError, match=r"\[0, π\]"):
            bs_antenna_gain(math.pi + 0.1, antenna)


class TestPathLoss:
    """Attenuation and large-scale fading."""

    @pytest.fixture
    def uu_los(self) -> LinkClass:
        return LinkClass(link_type=LinkType.UU, condition=Condition.LOS, alpha=2.0, tau_hat_db=30.0)

    def test_path_loss_formula(self, uu_los: LinkClass) -> None:
        """Test: Is τ = τ̂·d^α with d the 3-D distance?"""
        loss = path_loss(LinkGeometry(400.0, 400.0, 100.0), uu_los)
        assert loss == pytest.approx(1e3 * 500.0**2)

    def test_uav_links_have_unit_gain(self, uu_los: LinkClass, antenna: AntennaParams) -> None:
        """Test: Is ζ = τ on links that do not touch a BS?"""
        geometry = LinkGeometry(400.0, 100.0, 100.0)
        assert large_scale_fading(geometry, uu_los, antenna) == pytest.approx(
            path_loss(geometry, uu_los)
        )

    def test_antenna_null_gives_infinite_fading(self, antenna: AntennaParams) -> None:
        """Test: Is a UAV right above a BS in the antenna null (ζ = inf)?"""
        ub = LinkClass(link_type=LinkType.UB, condition=Condition.LOS, alpha=2.2, tau_hat_db=34.0)
        zeta = large_scale_fading(LinkGeometry(0.0, 100.0, 25.0), ub, antenna)
        assert math.isinf(zeta)

    def test_co_located_path_loss(self, uu_los: LinkClass) -> None:
        """Test: Is path loss undefined at zero distance?"""
        with pytest.raises(ValueError, match="co-located"):
            path_loss(LinkGeometry(0.0, 100.0, 100.0), uu_los)


class TestPowerControl:
    """Fractional power control."""

    @pytest.fixture
    def pc(self) -> PowerControlParams:
        return PowerControlParams()

    def test_unclamped_power(self, pc: PowerControlParams) -> None:
        """Test: Is P = ρ·ζ^ε below the cap?"""
        power = transmit_power(1e10, pc, NodeRole.UAV)
        assert power == pytest.approx(pc.rho_w(NodeRole.UAV) * 1e6)

    def test_clamped_power(self, pc: PowerControlParams) -> None:
        """Test: Is P capped at P_max for a very lossy serving link?"""
        assert transmit_power(1e20, pc, NodeRole.GUE) == pytest.approx(pc.p_max_w(NodeRole.GUE))

    def test_infinite_serving_loss_is_capped(self, pc: PowerControlParams) -> None:
        """Test: Does an antenna-null serving link transmit at P_max?"""
        assert transmit_power(math.inf, pc, NodeRole.GUE) == pytest.approx(pc.p_max_w(NodeRole.GUE))

    def test_epsilon_zero_is_constant_power(self) -> None:
        """Test: Does ε = 0 give P = ρ regardless of the link?"""
        pc = PowerControlParams(epsilon_u=0.0, rho_u_dbm=10.0)
        power = transmit_power(np.array([1e3, 1e9]), pc, NodeRole.UAV)
        np.testing.assert_allclose(power, [1e-2, 1e-2])

    def test_non_positive_loss_rejected(self, pc: PowerControlParams) -> None:
        """Test: Is ζ ≤ 0 rejected?"""
        with pytest.raises(ValueError, match="positive"):
            transmit_power(0.0, pc, NodeRole.UAV)


class TestFading:
    """Nakagami-m power gains."""

    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_unit_mean_and_variance(self, m: int) -> None:
        """Test: Are gains unit-mean with variance 1/m?"""
        cls = LinkClass(
            link_type=LinkType.UU, condition=Condition.NLOS, alpha=3.0, tau_hat_db=30.0, m_fading=m
        )
        draws = np.asarray(sample_fading(cls, np.random.default_rng(7), size=200_000))

        assert draws.mean() == pytest.approx(1.0, abs=0.01)
        assert draws.var() == pytest.approx(1.0 / m, rel=0.03)

    def test_rayleigh_cdf(self) -> None:
        """Test: Is the m = 1 CDF 1 − e^{−ω}?"""
        omega = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(fading_cdf(omega, 1), 1.0 - np.exp(-omega), rtol=1e-12)

    def test_cdf_matches_series(self) -> None:
        """Test: Does the m = 3 CDF match its finite series?"""
        omega, m = 0.8, 3
        series = 1.0 - sum((m * omega) ** i * math.exp(-m * omega) / math.factorial(i) for i in range(m))
        assert fading_cdf(omega, m) == pytest.approx(series, rel=1e-12)

    @pytest.mark.parametrize("m", [1, 3])
    def test_empirical_cdf_converges_0_005(self, m: int) -> None:
        """Test: Is the KS distance of 10⁶ draws to the Nakagami power CDF below 0.005?"""
        cls = LinkClass(
            link_type=LinkType.GU, condition=Condition.LOS, alpha=2.5, tau_hat_db=30.0, m_fading=m
        )
        draws = np.asarray(sample_fading(cls, np.random.default_rng(19), size=1_000_000))

        ks = stats.kstest(draws, lambda w: fading_cdf(w, m))
        assert ks.statistic < 0.005
        assert draws.mean() == pytest.approx(1.0, abs=0.005)
