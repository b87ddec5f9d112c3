import logging
from pathlib import Path

import pytest

from nirp_sfc.configuration import (
    ConfigurationError,
    EnvironmentStringConfiguration,
    LogLevel,
    OutputDirectory,
    WorkerCount,
)


def test_environment_string_configuration():
    value_to_put = "test-value"

    class MyTestConfiguration(EnvironmentStringConfiguration):
        parameter_prefix = "TEST_PREFIX"
        parameter_name = "TEST_PARAMETER"
        default = "unset"

    configuration = MyTestConfiguration(
        environ={"TEST_PREFIX_TEST_PARAMETER": value_to_put}
    )

    assert configuration.data == value_to_put
    assert configuration == value_to_put
    assert MyTestConfiguration(environ={}) == "unset"


def test_configuration_is_read_only():
    configuration = OutputDirectory(environ={})

    with pytest.raises(NotImplementedError):
        configuration.data = "elsewhere"


def test_defaults():
    assert LogLevel(environ={}).level == logging.INFO
    assert OutputDirectory(environ={}).path == Path("out")
    assert WorkerCount(environ={}).value == 1


def test_reads_the_process_environment(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("NIRP_SFC_LOG_LEVEL", "debug")
    monkeypatch.setenv("NIRP_SFC_WORKERS", "4")

    assert LogLevel().level == logging.DEBUG
    assert int(WorkerCount()) == 4


@pytest.mark.parametrize(
    "configuration",
    [
        pytest.param(
            lambda: LogLevel(environ={"NIRP_SFC_LOG_LEVEL": "LOUD"}).level,
            id="log-level",
        ),
        pytest.param(
            lambda: WorkerCount(environ={"NIRP_SFC_WORKERS": "many"}).value,
            id="not-int",
        ),
        pytest.param(
            lambda: WorkerCount(environ={"NIRP_SFC_WORKERS": "0"}).value,
            id="zero",
        ),
    ],
)
def test_invalid_values(configuration):
    with pytest.raises(ConfigurationError) as error:
        configuration()

    assert error.value.variable.startswith("NIRP_SFC_")
