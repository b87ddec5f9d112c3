import json
from pathlib import Path
from unittest import mock

import pytest

from nirp_sfc.events import Termination
from nirp_sfc.instrumentation import Instrumentation
from nirp_sfc.scenarios import (
    PRESETS,
    Check,
    ExpectedOutcome,
    InMemoryProvider,
    JsonFileProvider,
    PresetProvider,
    Scenario,
    ScenarioFormatError,
    ScenarioNotFound,
    SweepAxis,
    SweepSpec,
    load_scenario_file,
    preset,
    resolve_scenario,
    run_scenario,
    sweep,
)
from nirp_sfc.scenarios.outcome import (
    UnknownMetricError,
    evaluate_check,
    evaluate_outcome,
)
from nirp_sfc.scenarios.presets import FLOOR
from nirp_sfc.scenarios.runner import apply_cell, load_sweep_document
from nirp_sfc.test_helpers import generate_scenario_document, generate_sweep_document


class TestPresets:
    def test_every_preset_is_known(self):
        assert sorted(PRESETS) == [
            "fig2",
            "fig3",
            "fig4",
            "fig5",
            "fig6",
            "fig6_floor",
        ]

    @pytest.mark.parametrize(
        "name, ell, b, fixed_rate",
        [
            pytest.param("fig2", 0.6, 0.0, True, id="fig2"),
            pytest.param("fig3", 6.0, 0.0, True, id="fig3"),
            pytest.param("fig4", 0.6, 0.4, False, id="fig4"),
            pytest.param("fig5", 6.0, 0.4, False, id="fig5"),
            pytest.param("fig6", 8.0, 0.4, False, id="fig6"),
        ],
    )
    def test_initial_conditions(self, name, ell, b, fixed_rate):
        scenario = preset(name)

        assert scenario.name == name
        assert scenario.initial_core.wage_share == 0.8
        assert scenario.initial_core.employment == 0.9
        assert scenario.initial_core.private_debt_ratio == ell
        assert scenario.initial_aux.gov_debt_ratio == b
        assert scenario.params.is_fixed_rate is fixed_rate

    def test_unknown_preset_lists_the_known_ones(self):
        with pytest.raises(ScenarioNotFound) as error:
            preset("fig7")

        assert error.value.known == sorted(PRESETS)
        assert "fig6_floor" in str(error.value)


@pytest.mark.parametrize("name", ["fig2", "fig3", "fig4", "fig5", "fig6"])
def test_preset_runs_meet_their_expected_outcome(name):
    """Each calibrated run ends the way it is documented to, and its audit passes."""
    run = run_scenario(preset(name))

    failing = [check for check in run.verdict.checks if not check.passed]
    assert run.verdict.termination_matches, run.trajectory.termination
    assert failing == []
    assert run.audit.passed


def test_floor_holds_the_policy_rate_up(fig6_run):
    floored = run_scenario(preset("fig6_floor"))

    assert floored.verdict.passed
    assert min(floored.trajectory.policy_rate) >= FLOOR - 1e-4
    assert min(fig6_run.trajectory.policy_rate) < FLOOR


class TestScenarioDocuments:
    def test_to_dict_and_from_dict_agree(self):
        scenario = preset("fig6_floor")

        assert Scenario.from_dict(scenario.to_dict()) == scenario

    def test_defaults_for_missing_initial_values(self):
        document = generate_scenario_document(
            initial={"omega": 0.8, "lambda": 0.9, "ell": 0.6}
        )

        scenario = Scenario.from_dict(document)

        assert scenario.initial_core.target_rate == 0.0
        assert scenario.initial_core.policy_rate == 0.0
        assert scenario.initial_aux.gov_debt_ratio == 0.0
        assert scenario.initial_aux.price_level == 1.0
        assert scenario.initial_aux.real_output == 100.0

    @pytest.mark.parametrize(
        "changes, path",
        [
            pytest.param({"params": {"markup": 0.5}}, "params.markup", id="bad-param"),
            pytest.param(
                {"params": {"mark_up": 1.3}}, "params.mark_up", id="unknown-param"
            ),
            pytest.param(
                {"initial": {"omega": 0.8, "lambda": 0.9}},
                "initial.ell",
                id="missing-ell",
            ),
            pytest.param(
                {"initial": {"omega": 0.8, "lambda": "high", "ell": 0.6}},
                "initial.lambda",
                id="not-a-number",
            ),
            pytest.param(
                {"initial": {"omega": 0.8, "lambda": 1.0, "ell": 0.6}},
                "initial",
                id="full-employment",
            ),
            pytest.param({"settings": {"horizon": -1}}, "settings", id="bad-setting"),
            pytest.param(
                {"expected_outcome": {"termination": "Exploded"}},
                "expected_outcome.termination",
                id="unknown-termination",
            ),
            pytest.param(
                {"expected_outcome": {"checks": [{"lower": 0}]}},
                "expected_outcome.checks[0]",
                id="check-without-metric",
            ),
            pytest.param({"colour": "blue"}, "colour", id="unknown-top-level"),
        ],
    )
    def test_format_errors_name_the_field(self, changes, path):
        document = {**generate_scenario_document(), **changes}

        with pytest.raises(ScenarioFormatError) as error:
            Scenario.from_dict(document)

        assert error.value.path == path


class TestProviders:
    def test_in_memory_provider(self):
        scenario = Scenario.from_dict(generate_scenario_document(name="short"))
        provider = InMemoryProvider({"short": scenario})

        assert provider.get_scenario("short") is scenario
        assert provider.names() == ["short"]
        with pytest.raises(ScenarioNotFound):
            provider.get_scenario("long")

    def test_preset_provider(self):
        assert PresetProvider().names() == sorted(PRESETS)

    def test_json_file_provider(self, tmp_path: Path):
        document = generate_scenario_document(name="short")
        (tmp_path / "short.json").write_text(json.dumps(document))
        provider = JsonFileProvider(tmp_path)

        assert provider.names() == ["short"]
        assert provider.get_scenario("short") == Scenario.from_dict(document)
        with pytest.raises(ScenarioNotFound) as error:
            provider.get_scenario("long")
        assert error.value.known == ["short"]

    def test_invalid_json_file(self, tmp_path: Path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")

        with pytest.raises(ScenarioFormatError) as error:
            load_scenario_file(path)

        assert error.value.path == "$"

    def test_resolve_scenario(self, tmp_path: Path):
        path = tmp_path / "short.json"
        path.write_text(json.dumps(generate_scenario_document(name="short")))

        assert resolve_scenario(str(path)).name == "short"
        assert resolve_scenario("fig4").name == "fig4"
        with pytest.raises(ScenarioNotFound):
            resolve_scenario(str(tmp_path / "missing.json"))


class TestOutcome:
    def test_short_run_meets_its_expectation(self):
        scenario = Scenario.from_dict(generate_scenario_document())

        run = run_scenario(scenario)

        assert run.trajectory.termination == Termination.HORIZON_REACHED
        assert run.passed

    def test_wrong_termination_fails_the_verdict(self, fig2_run):
        expected = ExpectedOutcome(termination=Termination.DEBT_BLOWUP)

        verdict = evaluate_outcome(expected, fig2_run.trajectory)

        assert not verdict.termination_matches
        assert not verdict.passed
        assert verdict.to_dict()["termination"] == "ConvergedToEquilibrium"

    @pytest.mark.parametrize(
        "check, passed",
        [
            pytest.param(Check("final_inflation", lower=0.0), True, id="lower-bound"),
            pytest.param(Check("final_inflation", upper=0.0), False, id="upper-bound"),
            pytest.param(
                Check("final_rho", lower=0.0, upper=0.0), True, id="inclusive"
            ),
        ],
    )
    def test_checks(self, fig2_run, check, passed):
        assert evaluate_check(check, fig2_run.trajectory).passed is passed

    def test_unknown_metric(self, fig2_run):
        with pytest.raises(UnknownMetricError):
            evaluate_check(Check("final_happiness"), fig2_run.trajectory)

    def test_deflation_gap_on_debt_blowup(self, fig3_run):
        """Inflation ends negative but above the collapse-limit inflation."""
        result = evaluate_check(Check("deflation_gap", lower=0.0), fig3_run.trajectory)

        assert result.passed
        assert fig3_run.trajectory.inflation[-1] < 0


class TestSweepSpec:
    def test_cells_are_row_major(self):
        spec = SweepSpec(
            (
                SweepAxis("initial.ell", (0.6, 6.0)),
                SweepAxis("params.gov_spend_share", (0.1, 0.2, 0.3)),
            )
        )

        cells = spec.cells()

        assert len(cells) == 6
        assert cells[0] == {"initial.ell": 0.6, "params.gov_spend_share": 0.1}
        assert cells[1] == {"initial.ell": 0.6, "params.gov_spend_share": 0.2}
        assert cells[3] == {"initial.ell": 6.0, "params.gov_spend_share": 0.1}

    @pytest.mark.parametrize(
        "name",
        [
            pytest.param("initial.mu", id="unknown-initial"),
            pytest.param("params.policy_mode", id="not-numeric"),
            pytest.param("ell", id="no-prefix"),
        ],
    )
    def test_invalid_axis_names(self, name):
        with pytest.raises(ScenarioFormatError):
            SweepAxis(name, (1.0,))

    def test_axis_names_are_unique(self):
        with pytest.raises(ScenarioFormatError):
            SweepSpec(
                (SweepAxis("initial.ell", (1.0,)), SweepAxis("initial.ell", (2.0,)))
            )

    def test_from_dict_with_a_range(self):
        spec = SweepSpec.from_dict(
            [{"name": "params.gov_spend_share", "start": 0.0, "stop": 0.2, "steps": 3}]
        )

        assert spec.axes[0].values == pytest.approx((0.0, 0.1, 0.2))
        assert SweepSpec.from_dict(spec.to_dict()) == spec

    def test_load_sweep_document_with_an_unknown_base(self):
        with pytest.raises(ScenarioFormatError) as error:
            load_sweep_document(generate_sweep_document(base="fig9"))

        assert error.value.path == "base"

    def test_apply_cell_moves_initial_values_and_parameters(self):
        scenario = apply_cell(
            preset("fig4"),
            {"initial.ell": 6.0, "initial.b": 1.0, "params.tax_share": 0.1},
        )

        assert scenario.initial_core.private_debt_ratio == 6.0
        assert scenario.initial_aux.gov_debt_ratio == 1.0
        assert scenario.params.tax_share == 0.1
        assert scenario.params.gov_spend_share == 0.2


class TestSweep:
    def test_single_cell_matches_a_direct_run(self, fig2_run):
        spec, base = load_sweep_document(generate_sweep_document())

        [cell] = sweep(spec, base)

        assert cell.termination == fig2_run.trajectory.termination
        assert cell.final["omega"] == fig2_run.trajectory.omega[-1]
        assert cell.final["ell"] == fig2_run.trajectory.private_debt[-1]

    def test_without_policy_high_debt_blows_up(self):
        spec = SweepSpec((SweepAxis("initial.ell", (0.6, 6.0)),))

        cells = sweep(spec, preset("fig2"))

        assert [cell.termination for cell in cells] == [
            Termination.CONVERGED,
            Termination.DEBT_BLOWUP,
        ]

    def test_with_policy_high_debt_converges(self):
        spec = SweepSpec((SweepAxis("initial.ell", (6.0, 8.0)),))

        cells = sweep(spec, preset("fig5"))

        assert [cell.termination for cell in cells] == [
            Termination.CONVERGED,
            Termination.CONVERGED,
        ]
        assert all(cell.min_policy_rate < 0 for cell in cells)

    def test_parallel_sweep_matches_serial(self):
        """Cells come back in grid order whatever order the workers finish in."""
        base = Scenario.from_dict(generate_scenario_document())
        spec = SweepSpec((SweepAxis("initial.ell", (2.0, 0.6, 1.0, 0.2)),))

        serial = sweep(spec, base)
        parallel = sweep(spec, base, workers=2)

        assert [cell.index for cell in parallel] == [0, 1, 2, 3]
        assert [cell.final for cell in parallel] == [cell.final for cell in serial]

    def test_failed_cell_is_recorded(self):
        instrumentation = mock.Mock(spec=Instrumentation)
        spec = SweepSpec((SweepAxis("params.markup", (1.3, 0.5)),))
        base = Scenario.from_dict(generate_scenario_document())

        cells = sweep(spec, base, instrumentation=instrumentation)

        assert not cells[0].failed
        assert cells[1].failed
        assert cells[1].termination is None
        assert cells[1].error.startswith("InvalidParametersError")
        instrumentation.sweep_cell_failed.assert_called_once_with(1, cells[1].error)

    def test_permuted_axis_values_permute_the_cells(self):
        """Each grid point gives the same result wherever it sits in the grid."""
        base = Scenario.from_dict(generate_scenario_document())
        spec = SweepSpec(
            (
                SweepAxis("initial.ell", (0.2, 0.6, 2.0)),
                SweepAxis("params.loan_spread", (0.02, 0.04)),
            )
        )
        permuted = SweepSpec(
            (
                SweepAxis("initial.ell", (2.0, 0.2, 0.6)),
                SweepAxis("params.loan_spread", (0.04, 0.02)),
            )
        )

        def by_coordinates(cells):
            return {
                tuple(sorted(cell.coordinates.items())): (cell.termination, cell.final)
                for cell in cells
            }

        original = sweep(spec, base)
        shuffled = sweep(permuted, base)

        assert [cell.coordinates for cell in shuffled][:2] == [
            {"initial.ell": 2.0, "params.loan_spread": 0.04},
            {"initial.ell": 2.0, "params.loan_spread": 0.02},
        ]
        assert by_coordinates(shuffled) == by_coordinates(original)
