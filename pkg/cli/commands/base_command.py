"""
Base class for the tvpinn commands
"""
import json
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from core.exceptions import ConfigurationError, DataFormatError

ConfigT = TypeVar("ConfigT", bound=BaseModel)


def _field_path(error: Dict[str, Any]) -> str:
    path = ""
    for part in error.get("loc", ()):
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path


class BaseCommand(ABC):
    """A command turns a configuration file into artifacts on disk"""

    def __init__(self, name: str, description: str, observer=None):
        self.name = name
        self.description = description
        self.observer = observer
        self.logger = logging.getLogger(f"command.{name}")

    @abstractmethod
    def run(self, **kwargs) -> Dict[str, Any]:
        """Execute the command and return a summary of what was produced"""
        pass

    def load_config(self, path: str, model: Type[ConfigT],
                    overrides: Optional[Dict[str, Any]] = None) -> ConfigT:
        """Parse and validate a JSON config; `overrides` are merged at the top level"""
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}")
        except json.JSONDecodeError as e:
            raise DataFormatError(e.msg, line=e.lineno, path=path) from e
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")

        for key, value in (overrides or {}).items():
            if isinstance(value, dict) and isinstance(data.get(key), dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value

        try:
            return model.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            field = _field_path(first)
            raise ConfigurationError(first["msg"], field=field) from e

    def log_event(self, event: str, context: Dict[str, Any]):
        self.logger.info(f"{event}: {context}")
        if self.observer is not None:
            self.observer.log_command(self.name, event, context)

    def __str__(self):
        return f"{self.name}: {self.description}"
