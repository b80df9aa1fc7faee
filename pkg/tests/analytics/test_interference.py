"""
Analytics - step sums, footprint tables and per-family interference integrals

Brute-force quadrature over the same LoS step grid is the oracle for the
step-sum evaluation.
"""

import dataclasses
import math

import numpy as np
import pytest
from scipy.integrate import quad_vec

from u2u_underlay.analytics.interference import (
    CellGrid,
    FootprintTable,
    InterferenceSpec,
    gue_to_bs_spec,
    gue_to_uav_spec,
    interference_integral,
    interference_specs,
    step_sum,
    step_sum_telescoped,
    uav_to_bs_spec,
    uav_to_uav_spec,
)
from u2u_underlay.scenario.params import Condition, ScenarioParams, Victim

RADIUS_M = 2000.0


@pytest.fixture(scope="module")
def params() -> ScenarioParams:
    return ScenarioParams(analytics={"interference_radius_m": RADIUS_M})


@pytest.fixture(scope="module")
def uu_spec(params: ScenarioParams) -> InterferenceSpec:
    return uav_to_uav_spec(params)


@pytest.fixture(scope="module")
def gb_spec(params: ScenarioParams) -> InterferenceSpec:
    return gue_to_bs_spec(params)


class TestCellGrid:
    """Annular cells on the LoS grid."""

    def test_containing(self) -> None:
        """Test: Is every distance mapped to the cell that holds it?"""
        cells = CellGrid(
            lo=np.array([0.0, 10.0, 20.0]),
            hi=np.array([10.0, 20.0, 30.0]),
            p=np.ones(3),
            gain=np.ones(3),
        )
        idx = cells.containing([0.0, 5.0, 10.0, 29.9, 30.0, 100.0])
        assert idx.tolist() == [0, 0, 1, 2, 3, 3], "Distances past the grid map to n_cells"

    def test_finite_radius_grid(self, uu_spec: InterferenceSpec) -> None:
        """Test: Does a finite radius close the grid exactly at the radius?"""
        cells = uu_spec.cell_grid(Condition.LOS)

        assert cells.lo[0] == 0.0
        assert cells.outer_edge == pytest.approx(RADIUS_M)
        np.testing.assert_allclose(cells.hi[:-1], cells.lo[1:])
        assert cells.constant_gain, "UAV victims have no antenna pattern"

    def test_conditions_are_complementary(self, uu_spec: InterferenceSpec) -> None:
        """Test: Do LoS and NLoS cell weights sum to one?"""
        los = uu_spec.cell_grid(Condition.LOS)
        nlos = uu_spec.cell_grid(Condition.NLOS)
        np.testing.assert_allclose(los.p + nlos.p, 1.0)

    def test_infinite_radius_reaches_far_field_for_bs(self, params: ScenarioParams) -> None:
        """Test: Does an unbounded BS family run to the far field before its last cell?"""
        spec = dataclasses.replace(uav_to_bs_spec(params), radius=math.inf)
        cells = spec.cell_grid(Condition.LOS)

        assert math.isinf(cells.hi[-1]), "Last cell must be unbounded"
        assert cells.lo[-1] >= spec.far_field_radius
        assert not cells.constant_gain, "BS pattern varies from cell to cell"

    def test_gain_subcells_split_every_cell(self, params: ScenarioParams) -> None:
        """Test: Does gain_subcells = 2 double the number of cells?"""
        spec = uav_to_bs_spec(params)
        refined = dataclasses.replace(spec, gain_subcells=2)
        base = spec.cell_grid(Condition.NLOS)
        fine = refined.cell_grid(Condition.NLOS)

        assert fine.n_cells == 2 * base.n_cells
        assert fine.outer_edge == pytest.approx(base.outer_edge)


class TestStepSums:
    """Cell-by-cell and telescoped forms of the step sum."""

    def test_telescoped_form_matches_1e_9(self, uu_spec: InterferenceSpec) -> None:
        """Test: Do both forms agree for a constant victim gain?"""
        cells = uu_spec.cell_grid(Condition.NLOS)
        cls = uu_spec.link_class(Condition.NLOS)
        loads = np.logspace(2, 14, 7)

        direct = step_sum(cells, cls, uu_spec.height_difference, loads)
        telescoped = step_sum_telescoped(cells, cls, uu_spec.height_difference, loads)
        np.testing.assert_allclose(direct, telescoped, rtol=1e-9)

    def test_telescoped_needs_constant_gain(self, params: ScenarioParams) -> None:
        """Test: Is the telescoped form refused under a BS antenna pattern?"""
        spec = uav_to_bs_spec(params)
        cells = spec.cell_grid(Condition.LOS)
        with pytest.raises(ValueError, match="constant victim gain"):
            step_sum_telescoped(cells, spec.link_class(Condition.LOS), spec.height_difference, 1e6)

    def test_start_skips_inner_cells(self, uu_spec: InterferenceSpec) -> None:
        """Test: Does a start on a cell edge drop exactly the cells before it?"""
        cells = uu_spec.cell_grid(Condition.LOS)
        cls = uu_spec.link_class(Condition.LOS)
        load = np.array([1e8])
        start = float(cells.lo[5])

        from_start = step_sum(cells, cls, 0.0, load, start=start, start_gain=1.0)
        tail_only = step_sum(cells.subset(slice(5, None)), cls, 0.0, load)
        np.testing.assert_allclose(from_start, tail_only, rtol=1e-12)

    def test_start_requires_gain(self, uu_spec: InterferenceSpec) -> None:
        """Test: Is a start without its gain rejected?"""
        cells = uu_spec.cell_grid(Condition.LOS)
        with pytest.raises(ValueError, match="start_gain"):
            step_sum(cells, uu_spec.link_class(Condition.LOS), 0.0, 1e6, start=100.0)


class TestInterferenceIntegral:
    """I^ξ(s) by exact summation and through footprint tables."""

    def test_matches_brute_force_quadrature_1e_7(self, uu_spec: InterferenceSpec) -> None:
        """Test: Does the UAV→UAV LoS integral match direct quadrature over r?"""
        s = 1e12
        xi = Condition.LOS
        cls = uu_spec.link_class(xi)
        cells = uu_spec.cell_grid(xi)
        sources = uu_spec.sources

        expected = 0.0
        for nu in Condition:
            loads = s * sources.power[nu] / cls.tau_hat

            def integrand(r: float, loads: np.ndarray = loads) -> np.ndarray:
                # Rayleigh fading: E[1 − e^{−μψ}] = μ/(1+μ), written to stay finite at r = 0
                return float(uu_spec.los(r)) * loads / (loads + r**cls.alpha) * r

            inner, _ = quad_vec(
                integrand,
                0.0,
                cells.outer_edge,
                epsabs=0.0,
                epsrel=1e-11,
                points=list(cells.lo[1:]),
                limit=2000,
            )
            expected += float(np.dot(sources.quadrature_weights(nu), inner))

        value = interference_integral(uu_spec, xi, s)
        assert value == pytest.approx(expected, rel=1e-7)

    def test_zero_and_negative_s(self, uu_spec: InterferenceSpec) -> None:
        """Test: Is I(0) = 0 and a negative s rejected?"""
        assert interference_integral(uu_spec, Condition.LOS, 0.0) == 0.0
        with pytest.raises(ValueError, match="non-negative"):
            interference_integral(uu_spec, Condition.LOS, -1.0)

    def test_increasing_in_s(self, gb_spec: InterferenceSpec) -> None:
        """Test: Does the associated GUE→BS integral grow with s?"""
        values = [interference_integral(gb_spec, Condition.NLOS, s) for s in (1e10, 1e12, 1e14)]
        assert 0.0 < values[0] < values[1] < values[2]

    def test_table_matches_direct_1e_5(self, uu_spec: InterferenceSpec) -> None:
        """Test: Does interpolation in the footprint table reproduce the exact sum?"""
        table = FootprintTable(uu_spec, Condition.NLOS)
        for s in (1e9, 3.7e11, 1e13):
            direct = interference_integral(uu_spec, Condition.NLOS, s)
            tabled = interference_integral(uu_spec, Condition.NLOS, s, table=table)
            assert tabled == pytest.approx(direct, rel=1e-5), f"s = {s:g}"

    def test_full_output_diagnostics(self, uu_spec: InterferenceSpec) -> None:
        """Test: Are cells, stop cell, tail bound and quadrature error reported?"""
        value, info = interference_integral(uu_spec, Condition.LOS, 1e12, full_output=True)

        assert info["family"] == "uu" and info["condition"] == "L"
        assert info["cells"] == uu_spec.cell_grid(Condition.LOS).n_cells
        assert info["tail_bound"] > 0.0, "A finite radius leaves a far-field remainder"
        assert 0.0 <= info["quad_err"] < 1e-3 * value


class TestFootprintTable:
    """Log-log spline tables of the step sum against the load."""

    def test_interpolation_error_1e_5(self, uu_spec: InterferenceSpec) -> None:
        """Test: Are off-grid loads interpolated to 1e-5 relative accuracy?"""
        table = FootprintTable(uu_spec, Condition.LOS)
        loads = np.logspace(-1.3, 25.7, 28)
        np.testing.assert_allclose(table(loads), table.exact(loads), rtol=1e-5)
        assert table.fallback_count == 0

    def test_heavy_loads_stay_interpolated(self, params: ScenarioParams) -> None:
        """Test: Does every family and condition keep positive columns up to 1e30?"""
        for victim in Victim:
            for spec in interference_specs(victim, params):
                for xi in Condition:
                    table = FootprintTable(spec, xi, points_per_decade=8)
                    assert table.exact_columns == 0, f"{spec.name}.{xi}"

    def test_saturated_loads_reach_the_footprint(self, uu_spec: InterferenceSpec) -> None:
        """Test: At loads that saturate every cell, is the step sum Σ p·area, to 1e-9?"""
        cells = uu_spec.cell_grid(Condition.LOS)
        area = 0.5 * np.sum(cells.p * (cells.hi**2 - cells.lo**2))
        table = FootprintTable(uu_spec, Condition.LOS)

        np.testing.assert_allclose(table.exact(np.array([1e28, 1e30])), area, rtol=1e-9)
        assert table(np.array([1e29]))[0] == pytest.approx(area, rel=1e-9)

    def test_out_of_range_loads_fall_back(self, uu_spec: InterferenceSpec) -> None:
        """Test: Are loads beyond the table evaluated exactly and counted?"""
        table = FootprintTable(uu_spec, Condition.LOS, log10_min=0.0, log10_max=10.0)
        loads = np.array([1e-3, 1e5, 1e12])

        np.testing.assert_allclose(table(loads), table.exact(loads), rtol=1e-5)
        assert table.fallback_count == 2

    def test_associated_columns(self, gb_spec: InterferenceSpec) -> None:
        """Test: Does the per-node associated table match the exact start-at-x sum?"""
        table = FootprintTable(gb_spec, Condition.NLOS)
        n = gb_spec.sources.nodes.size
        assert table.n_columns == n

        loads = 1e11 * gb_spec.sources.power[Condition.LOS]
        np.testing.assert_allclose(table(loads), table.exact(loads, np.arange(n)), rtol=1e-5)

    def test_associated_shape_checked(self, gb_spec: InterferenceSpec) -> None:
        """Test: Is a load array with the wrong column count rejected?"""
        table = FootprintTable(gb_spec, Condition.LOS, points_per_decade=8)
        with pytest.raises(ValueError, match="last axis"):
            table(np.ones(3))


class TestFamilyBuilders:
    """The four interference families."""

    def test_victims_and_names(self, params: ScenarioParams) -> None:
        """Test: Are the families paired with the right victims?"""
        uav_fam, gue_fam = interference_specs(Victim.UAV, params)
        assert (uav_fam.name, gue_fam.name) == ("uu", "gu")
        assert uav_fam.victim is Victim.UAV and gue_fam.victim is Victim.UAV

        uav_fam, gue_fam = interference_specs(Victim.BS, params)
        assert (uav_fam.name, gue_fam.name) == ("ub", "gb")
        assert gue_fam.associated and not uav_fam.associated
        assert uav_fam.victim is Victim.BS

    def test_densities(self, params: ScenarioParams) -> None:
        """Test: Do UAV families use λ_u and GUE families λ_b?"""
        assert uav_to_uav_spec(params).density == pytest.approx(params.lambda_u)
        assert gue_to_uav_spec(params).density == pytest.approx(params.lambda_b)

    def test_bs_gain_only_on_bs_families(self, params: ScenarioParams) -> None:
        """Test: Do only BS victims see an antenna pattern?"""
        assert gue_to_uav_spec(params).peak_gain() == 1.0
        spec = uav_to_bs_spec(params)
        assert spec.peak_gain() == pytest.approx(8.0 * params.antenna.element_peak_gain)
        assert np.all(spec.gain_at(np.array([10.0, 500.0])) <= spec.peak_gain())

    def test_negative_density_rejected(self, uu_spec: InterferenceSpec) -> None:
        """Test: Is a negative source density rejected?"""
        with pytest.raises(ValueError, match="non-negative"):
            dataclasses.replace(uu_spec, density=-1.0)
