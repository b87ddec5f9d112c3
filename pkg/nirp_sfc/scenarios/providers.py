import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from nirp_sfc.scenarios.base import (
    Scenario,
    ScenarioFormatError,
    ScenarioNotFound,
    ScenarioProvider,
)
from nirp_sfc.scenarios.presets import PRESETS

logger = logging.getLogger(__name__)


@dataclass
class InMemoryProvider(ScenarioProvider):
    """A provider for scenarios held in a dictionary"""

    scenarios: dict[str, Scenario]

    def get_scenario(self, name: str) -> Scenario:
        try:
            return self.scenarios[name]
        except KeyError:
            raise ScenarioNotFound(name, self.scenarios)

    def names(self) -> list[str]:
        return sorted(self.scenarios)


class PresetProvider(InMemoryProvider):
    """The presets shipped with the package"""

    def __init__(self) -> None:
        super().__init__({name: build() for name, build in PRESETS.items()})


def load_scenario_file(path: Union[str, Path]) -> Scenario:
    """Read a scenario document from disk

    :raises ScenarioNotFound: If the file does not exist
    :raises ScenarioFormatError: If the file is not a valid scenario document
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ScenarioNotFound(str(path), [])

    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioFormatError("$", f"invalid JSON at line {e.lineno}: {e.msg}")

    return Scenario.from_dict(document)


@dataclass
class JsonFileProvider(ScenarioProvider):
    """A provider for scenarios stored as ``<name>.json`` files in a directory"""

    directory: Path

    def get_scenario(self, name: str) -> Scenario:
        path = self.directory / f"{name}.json"
        if not path.is_file():
            raise ScenarioNotFound(name, self.names())

        logger.debug("Loading scenario %s from %s", name, path)
        return load_scenario_file(path)

    def names(self) -> list[str]:
        return sorted(path.stem for path in self.directory.glob("*.json"))


def resolve_scenario(reference: str) -> Scenario:
    """A preset by name, or a scenario document by path"""
    if reference.endswith(".json") or Path(reference).is_file():
        return load_scenario_file(reference)

    return PresetProvider().get_scenario(reference)
