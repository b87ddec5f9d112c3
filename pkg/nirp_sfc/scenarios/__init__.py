from nirp_sfc.scenarios.base import (
    Check,  # noqa: F401
    ExpectedOutcome,  # noqa: F401
    Scenario,  # noqa: F401
    ScenarioFormatError,  # noqa: F401
    ScenarioNotFound,  # noqa: F401
    ScenarioProvider,  # noqa: F401
)
from nirp_sfc.scenarios.presets import (
    PRESETS,  # noqa: F401
    preset,  # noqa: F401
)
from nirp_sfc.scenarios.providers import (
    InMemoryProvider,  # noqa: F401
    JsonFileProvider,  # noqa: F401
    PresetProvider,  # noqa: F401
    load_scenario_file,  # noqa: F401
    resolve_scenario,  # noqa: F401
)
from nirp_sfc.scenarios.runner import (
    ScenarioRun,  # noqa: F401
    SweepAxis,  # noqa: F401
    SweepCell,  # noqa: F401
    SweepSpec,  # noqa: F401
    run_scenario,  # noqa: F401
    sweep,  # noqa: F401
)
