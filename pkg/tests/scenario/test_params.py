"""
Scenario parameters - validated models and derived quantities

Checks the reference link-class table, the SI views, and the invariants the
pydantic models enforce on construction.
"""

import math

import pytest
from pydantic import ValidationError

from u2u_underlay.scenario.params import (
    Condition,
    LinkType,
    NodeRole,
    PowerControlParams,
    ScenarioParams,
    mean_u2u_distance,
    noise_power_dbm,
    parse_override_key,
    sigma_g,
)


class TestLinkClassTable:
    """Reference path-loss constants resolved at the configured UAV height."""

    @pytest.fixture
    def params(self) -> ScenarioParams:
        return ScenarioParams()

    def test_every_link_class_present(self, params: ScenarioParams) -> None:
        """Test: Is there one class per link type and condition?"""
        keys = set(params.link_classes)
        assert len(keys) == 8, f"Expected 8 link classes, got {len(keys)}"
        for link_type in LinkType:
            for condition in Condition:
                assert (link_type, condition) in keys, f"Missing {link_type}.{condition}"

    def test_ground_los_reference_loss(self, params: ScenarioParams) -> None:
        """Test: Does GB LoS use 28 + 20·log10(f) at 2 GHz?"""
        cls = params.link_class(LinkType.GB, Condition.LOS)
        assert cls.alpha == pytest.approx(2.2)
        assert cls.tau_hat_db == pytest.approx(28.0 + 20.0 * math.log10(2.0))

    def test_uav_nlos_exponent_depends_on_height(self, params: ScenarioParams) -> None:
        """Test: Is the UU NLoS exponent 4.6 − 0.7·log10(h_u)?"""
        at_100 = params.link_class(LinkType.UU, Condition.NLOS).alpha
        at_150 = params.with_overrides(h_u=150.0).link_class(LinkType.UU, Condition.NLOS).alpha

        assert at_100 == pytest.approx(3.2), "4.6 − 0.7·2 at 100 m"
        assert at_150 == pytest.approx(4.6 - 0.7 * math.log10(150.0))
        assert at_150 < at_100, "Higher UAVs see a smaller NLoS exponent"

    def test_fading_defaults_to_rayleigh(self, params: ScenarioParams) -> None:
        """Test: Do all classes default to m = 1?"""
        assert params.max_fading_parameter() == 1

    def test_link_override_patches_one_class(self) -> None:
        """Test: Does an explicit override change only the named class?"""
        params = ScenarioParams(link_overrides={"uu.N.m_fading": 2.0, "gb.L.alpha": 2.5})

        assert params.link_class(LinkType.UU, Condition.NLOS).m_fading == 2
        assert params.link_class(LinkType.UU, Condition.LOS).m_fading == 1
        assert params.link_class(LinkType.GB, Condition.LOS).alpha == pytest.approx(2.5)
        assert params.max_fading_parameter() == 2

    def test_fractional_fading_rejected(self) -> None:
        """Test: Is a non-integer Nakagami shape a validation error?"""
        with pytest.raises(ValidationError, match="m_fading"):
            ScenarioParams(link_overrides={"uu.N.m_fading": 1.5})

    def test_override_key_parsing(self) -> None:
        """Test: Are override keys split into type, condition and field?"""
        assert parse_override_key("gu.L.tau_hat_db") == (
            LinkType.GU,
            Condition.LOS,
            "tau_hat_db",
        )
        with pytest.raises(ValueError, match="unknown link field"):
            parse_override_key("gu.L.gain")
        with pytest.raises(ValueError, match="unknown link class"):
            parse_override_key("xx.L.alpha")


class TestDerivedQuantities:
    """SI views and helper functions."""

    def test_densities_in_per_square_metre(self) -> None:
        """Test: Are km⁻² densities exposed in m⁻²?"""
        params = ScenarioParams()
        assert params.lambda_b == pytest.approx(5e-6)
        assert params.lambda_u == pytest.approx(1e-6)

    def test_noise_power_over_one_prb(self) -> None:
        """Test: Is the noise −174 + 10·log10(180 kHz) + 7 dB?"""
        expected = -174.0 + 10.0 * math.log10(180_000.0) + 7.0
        assert noise_power_dbm(ScenarioParams()) == pytest.approx(expected)

    def test_los_grid_and_truncation(self) -> None:
        """Test: Is the auto LoS extent 10 cell radii, rounded up to the grid?"""
        params = ScenarioParams()
        spacing = params.los_grid_spacing_m
        assert spacing == pytest.approx(1000.0 / math.sqrt(150.0))

        extent = params.los_truncation_radius_m
        cells = extent / spacing
        assert cells == pytest.approx(round(cells)), "Extent must be whole grid cells"
        assert extent >= 10.0 / math.sqrt(math.pi * params.lambda_b)
        assert extent - spacing < 10.0 / math.sqrt(math.pi * params.lambda_b)

    def test_interference_radius_follows_disc(self) -> None:
        """Test: Does the analytic radius default to the simulation disc?"""
        params = ScenarioParams(simulation={"disc_radius_m": 4000.0})
        assert params.interference_radius_m == pytest.approx(4000.0)

        closed = params.with_overrides(analytics={"interference_radius_m": math.inf})
        assert math.isinf(closed.interference_radius_m)

    def test_serving_scale(self) -> None:
        """Test: Is the GUE serving scale 1/√(2πλ_b)?"""
        params = ScenarioParams()
        assert sigma_g(params) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi * 5e-6))

    def test_mean_u2u_distance_warns_when_truncation_bites(
        self, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test: Is a warning logged when r_max is close to sigma_u?"""
        params = ScenarioParams(sigma_u=100.0, r_max=200.0)
        with caplog.at_level("WARNING"):
            mean = mean_u2u_distance(params)

        assert mean == pytest.approx(100.0 * math.sqrt(math.pi / 2.0))
        assert "not >> sigma_u" in caplog.text

    def test_link_heights(self) -> None:
        """Test: Are transmitter and receiver heights paired per link type?"""
        params = ScenarioParams()
        assert params.link_heights(LinkType.GU) == (1.5, 100.0)
        assert params.height_difference(LinkType.UB) == pytest.approx(75.0)
        assert params.height_difference(LinkType.UU) == 0.0
        assert LinkType.GB.touches_bs and not LinkType.GU.touches_bs


class TestValidation:
    """Invariants enforced at construction."""

    def test_epsilon_outside_unit_interval(self) -> None:
        """Test: Is ε_u = 1.2 rejected with the violated range?"""
        with pytest.raises(ValidationError, match=r"epsilon ∈ \[0,1\]"):
            PowerControlParams(epsilon_u=1.2)

    def test_thresholds_must_increase(self) -> None:
        """Test: Is a non-increasing threshold grid rejected?"""
        with pytest.raises(ValidationError, match="strictly increasing"):
            ScenarioParams(sinr_threshold_db=(0.0, 0.0, 2.0))

    def test_models_are_frozen(self) -> None:
        """Test: Can a loaded scenario be mutated?"""
        params = ScenarioParams()
        with pytest.raises(ValidationError):
            params.h_u = 10.0  # type: ignore[misc]

    def test_unknown_override_field(self) -> None:
        """Test: Does with_overrides reject unknown field names?"""
        with pytest.raises(ValueError, match="unknown scenario field"):
            ScenarioParams().with_overrides(height=3.0)

    def test_power_control_per_role(self) -> None:
        """Test: Are GUE and UAV power constants kept apart?"""
        pc = PowerControlParams(p_max_u_dbm=30.0, epsilon_g=0.4)
        assert pc.p_max_w(NodeRole.UAV) == pytest.approx(1.0)
        assert pc.p_max_w(NodeRole.GUE) == pytest.approx(10 ** (24 / 10) * 1e-3)
        assert pc.epsilon(NodeRole.GUE) == pytest.approx(0.4)
        assert pc.epsilon(NodeRole.UAV) == pytest.approx(0.6)
