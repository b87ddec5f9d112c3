import math

import numpy as np
import pytest
from scipy.optimize import brentq

from nirp_sfc.equilibrium import (
    DegenerateEquilibrium,
    Equilibrium,
    NoInteriorEquilibrium,
    Stability,
    classify_stability,
    collapse_limit,
    equilibrium_profit_share,
    numerical_jacobian,
    solve_interior_equilibrium,
)
from nirp_sfc.events import Termination
from nirp_sfc.integrator import SolverSettings, integrate
from nirp_sfc.model import (
    AuxState,
    ContractViolation,
    CoreState,
    FixedRate,
    ModelParams,
    core_rhs,
    investment,
    phillips_inverse,
)
from nirp_sfc.scenarios.presets import ACTIVE_RULE_PARAMS

FIXED_RATE = ModelParams(policy_mode=FixedRate(rate=0.03))


class TestSolveInteriorEquilibrium:
    def test_profit_share_gives_natural_growth(self):
        params = ModelParams()
        target = params.capital_output * (
            params.productivity_growth + params.labor_growth + params.depreciation
        )

        bisected = brentq(
            lambda profit: investment(profit, params) - target, -1.0, 1.0, xtol=1e-14
        )

        assert equilibrium_profit_share(params) == pytest.approx(
            (math.log(0.2315) + 5) / 20, abs=1e-12
        )
        assert equilibrium_profit_share(params) == pytest.approx(bisected, abs=1e-10)

    def test_fixed_rate_equilibrium(self):
        equilibrium = solve_interior_equilibrium(FIXED_RATE)

        assert equilibrium.residual(FIXED_RATE) < 1e-10
        assert equilibrium.wage_share == pytest.approx(0.7983, abs=2e-3)
        assert equilibrium.employment == pytest.approx(0.9616, abs=5e-3)
        assert equilibrium.private_debt_ratio == pytest.approx(0.8275, rel=2e-2)
        assert equilibrium.gov_debt_ratio == 0.0

    def test_full_indexation_pins_employment_to_productivity(self):
        """With gamma = 1 inflation drops out of the wage equation."""
        params = FIXED_RATE.with_overrides(money_illusion=1.0)

        equilibrium = solve_interior_equilibrium(params)

        assert equilibrium.employment == pytest.approx(
            phillips_inverse(params.productivity_growth, params), abs=1e-12
        )

    @pytest.mark.parametrize(
        "policy_rate",
        [
            pytest.param(-0.01, id="negative"),
            pytest.param(0.013, id="positive"),
        ],
    )
    def test_every_policy_rate_gives_an_equilibrium(self, policy_rate):
        """Under the active rule equilibria form a family indexed by the policy rate."""
        equilibrium = solve_interior_equilibrium(ACTIVE_RULE_PARAMS, policy_rate)

        assert equilibrium.residual(ACTIVE_RULE_PARAMS) < 1e-10
        assert equilibrium.core.target_rate == policy_rate
        assert equilibrium.gov_debt_ratio == pytest.approx(
            0.2
            / (
                ACTIVE_RULE_PARAMS.natural_growth
                + ACTIVE_RULE_PARAMS.inflation_relax
                * (ACTIVE_RULE_PARAMS.markup * equilibrium.wage_share - 1)
                - policy_rate
            )
        )

    def test_unreachable_growth_has_no_equilibrium(self):
        params = FIXED_RATE.with_overrides(productivity_growth=-0.06)

        with pytest.raises(NoInteriorEquilibrium):
            solve_interior_equilibrium(params)

    def test_zero_natural_growth_without_inflation_is_degenerate(self):
        params = FIXED_RATE.with_overrides(
            productivity_growth=0.025, labor_growth=-0.025, inflation_relax=0.0
        )

        with pytest.raises(DegenerateEquilibrium):
            solve_interior_equilibrium(params)


class TestStability:
    def test_fixed_rate_policy_block_is_inert(self):
        equilibrium = classify_stability(
            solve_interior_equilibrium(FIXED_RATE), FIXED_RATE
        )

        assert equilibrium.jacobian is not None
        np.testing.assert_array_equal(equilibrium.jacobian[3:, :], 0.0)
        np.testing.assert_array_equal(equilibrium.jacobian[:, 3:], 0.0)
        assert equilibrium.classification == Stability.LOCALLY_STABLE

    def test_classification_agrees_with_a_perturbed_run(self):
        equilibrium = classify_stability(
            solve_interior_equilibrium(FIXED_RATE), FIXED_RATE
        )
        start = equilibrium.core.as_array() + np.array([1e-3, -1e-3, 1e-3, 0, 0])

        trajectory = integrate(
            CoreState.from_array(start),
            AuxState(0.0),
            FIXED_RATE,
            SolverSettings(horizon=400.0),
        )

        assert equilibrium.classification == Stability.LOCALLY_STABLE
        assert trajectory.termination == Termination.CONVERGED
        drift = trajectory.states[-1, :5] - equilibrium.core.as_array()
        assert np.max(np.abs(drift)) < 1e-3

    def test_active_rule_classification_agrees_with_a_perturbed_run(self):
        """A stable point of the active rule attracts nearby starts onto the
        family of equilibria, close to where they started."""
        equilibrium = classify_stability(
            solve_interior_equilibrium(ACTIVE_RULE_PARAMS, 0.013), ACTIVE_RULE_PARAMS
        )
        start = equilibrium.core.as_array() + np.array([1e-3, -1e-3, 1e-3, 1e-4, 0])

        trajectory = integrate(
            CoreState.from_array(start),
            AuxState(equilibrium.gov_debt_ratio),
            ACTIVE_RULE_PARAMS,
            SolverSettings(horizon=800.0),
        )

        assert equilibrium.classification == Stability.LOCALLY_STABLE
        assert trajectory.termination == Termination.CONVERGED
        final = CoreState.from_array(trajectory.states[-1, :5])
        assert np.max(np.abs(core_rhs(final, ACTIVE_RULE_PARAMS).as_array())) < 1e-4
        drift = trajectory.states[-1, :5] - equilibrium.core.as_array()
        assert np.max(np.abs(drift)) < 1e-2

    def test_jacobian_step_halving_agrees(self):
        """Halving the step changes the central difference by its h**2 error only."""
        state = solve_interior_equilibrium(FIXED_RATE).core

        full = numerical_jacobian(state, FIXED_RATE, scale=1e-6)
        half = numerical_jacobian(state, FIXED_RATE, scale=5e-7)
        extrapolated = (4 * half - full) / 3

        np.testing.assert_allclose(full, half, rtol=0, atol=1e-6)
        np.testing.assert_allclose(extrapolated, half, rtol=0, atol=1e-6)

    def test_jacobian_does_not_depend_on_the_step(self):
        """Two perturbation sizes agree, so the difference quotient has converged."""
        state = solve_interior_equilibrium(FIXED_RATE).core

        fine = numerical_jacobian(state, FIXED_RATE, scale=1e-6)
        coarse = numerical_jacobian(state, FIXED_RATE, scale=1e-4)

        np.testing.assert_allclose(fine, coarse, rtol=1e-3, atol=1e-7)

    def test_jacobian_matches_a_directional_difference(self):
        state = CoreState(0.8, 0.9, 0.6, 0.0, 0.0)
        direction = np.array([1.0, -0.5, 0.25, 0.0, 0.0])
        h = 1e-7

        jacobian = numerical_jacobian(state, FIXED_RATE)
        forward = core_rhs(
            CoreState.from_array(state.as_array() + h * direction), FIXED_RATE
        ).as_array()
        backward = core_rhs(
            CoreState.from_array(state.as_array() - h * direction), FIXED_RATE
        ).as_array()

        np.testing.assert_allclose(
            jacobian @ direction, (forward - backward) / (2 * h), rtol=1e-5, atol=1e-9
        )

    def test_non_equilibrium_points_are_refused(self):
        equilibrium = solve_interior_equilibrium(FIXED_RATE)
        moved = Equilibrium(
            profit_share=equilibrium.profit_share,
            wage_share=equilibrium.wage_share + 0.01,
            employment=equilibrium.employment,
            private_debt_ratio=equilibrium.private_debt_ratio,
            policy_rate=0.0,
            gov_debt_ratio=0.0,
        )

        with pytest.raises(ContractViolation):
            classify_stability(moved, FIXED_RATE)

    def test_to_dict(self):
        equilibrium = classify_stability(
            solve_interior_equilibrium(FIXED_RATE), FIXED_RATE
        )

        document = equilibrium.to_dict()

        assert set(document) == {
            "pi_bar",
            "omega_bar",
            "lambda_bar",
            "ell_bar",
            "rho_bar",
            "r_g_bar",
            "b_bar",
            "jacobian",
            "eigenvalues",
            "classification",
        }
        assert document["classification"] == "LocallyStable"
        assert len(document["eigenvalues"]) == 5
        assert all(len(pair) == 2 for pair in document["eigenvalues"])


class TestCollapseLimit:
    def test_baseline(self):
        wage_share, price_growth = collapse_limit(ModelParams())

        assert wage_share == pytest.approx(0.005 / 0.091, abs=1e-12)
        assert price_growth == pytest.approx(-0.325, abs=1e-3)

    def test_full_indexation_drives_wages_to_zero(self):
        wage_share, price_growth = collapse_limit(ModelParams(money_illusion=1.0))

        assert wage_share == 0.0
        assert price_growth == pytest.approx(-0.35)
