import pytest

from nirp_sfc.scenarios import ScenarioRun, preset, run_scenario


@pytest.fixture(autouse=True)
def nirp_sfc_testing_envvars(monkeypatch: pytest.MonkeyPatch, tmp_path):
    """Pin the environment configuration for every test."""
    monkeypatch.setenv("NIRP_SFC_LOG_LEVEL", "WARNING")
    monkeypatch.setenv("NIRP_SFC_WORKERS", "1")
    monkeypatch.setenv("NIRP_SFC_OUT_DIR", str(tmp_path / "out"))


@pytest.fixture(scope="session")
def fig2_run() -> ScenarioRun:
    return run_scenario(preset("fig2"))


@pytest.fixture(scope="session")
def fig3_run() -> ScenarioRun:
    return run_scenario(preset("fig3"))


@pytest.fixture(scope="session")
def fig6_run() -> ScenarioRun:
    return run_scenario(preset("fig6"))
