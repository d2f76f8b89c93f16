"""
Configuration handling of the termination checker.

Options come from an optional JSON file and are overridden by command line flags.
"""

import dataclasses
import json
import logging
import os
import typing
from dataclasses import dataclass

_LOG = logging.getLogger(__name__)

CONFIG_ENV = "TERMCHECK_CONFIG"
LOG_LEVEL_ENV = "TERMCHECK_LOG_LEVEL"


@dataclass
class Options:
    check_only: bool = False
    """Only analyse, do not evaluate terms"""
    eval_only: bool = False
    """Only evaluate terms, print no call or verdict lines"""
    strict: bool = False
    """Exit with a distinct status if any function fails the check"""
    dot: str | None = None
    """Write the call graph in DOT format to this file, '-' for standard output"""
    dot_completed: bool = False
    """Export the completed graph instead of the extracted one"""
    verbose: bool = False
    """Print full call matrices below each call line"""
    fuel: int | None = None
    """Evaluation step budget, unlimited if None"""
    recursion_limit: int = 20000
    """Python recursion limit raised for deeply nested evaluations"""

    def __post_init__(self) -> None:
        if self.check_only and self.eval_only:
            raise ValueError("check_only and eval_only exclude each other")
        if self.fuel is not None and self.fuel < 0:
            raise ValueError(f"fuel must not be negative: {self.fuel}")
        if self.recursion_limit < 1:
            raise ValueError(f"recursion_limit must be positive: {self.recursion_limit}")

    @property
    def analyze(self) -> bool:
        """Whether the call graph has to be built at all."""
        return not self.eval_only or self.dot is not None

    @property
    def evaluate(self) -> bool:
        return not self.check_only


def _accepts(field: dataclasses.Field, value: object) -> bool:
    """Whether a JSON value has the type of an option."""
    types = typing.get_args(field.type) or (field.type,)
    if isinstance(value, bool):
        return bool in types
    return isinstance(value, types)


def load_options(path: str | None = None) -> dict[str, object]:
    """
    Load option values from a JSON file.

    Entries that are unknown or invalid are logged and skipped; the other
    entries still apply.

    :param path: the file; falls back to the ``TERMCHECK_CONFIG`` environment variable
    :return: the valid option values found, empty if there is no usable file
    """
    path = path or os.getenv(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError:
        _LOG.error("Cannot open the config file %s", path)
        return {}
    except ValueError:
        _LOG.error("Empty or invalid config file %s", path)
        return {}
    if not isinstance(data, dict):
        _LOG.error("Config file %s must contain a JSON object", path)
        return {}

    fields = {f.name: f for f in dataclasses.fields(Options)}
    values = {}
    for key, value in data.items():
        field = fields.get(key)
        if field is None:
            _LOG.warning("Unknown configuration entry will be ignored: %s", key)
            continue
        if not _accepts(field, value):
            _LOG.error("Invalid configuration entry will be ignored: %s=%r", key, value)
            continue
        try:
            Options(**{key: value})
        except ValueError as err:
            _LOG.error("Invalid configuration entry will be ignored: %s", err)
            continue
        values[key] = value

    try:
        Options(**values)
    except ValueError as err:
        _LOG.error("Config file %s is inconsistent and will be ignored: %s", path, err)
        return {}
    return values
