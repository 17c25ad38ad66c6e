"""
Configuration for ordlab pipelines
"""

import os
from dataclasses import dataclass, field, fields, replace

from dotenv import dotenv_values, load_dotenv

from src.errors import OrdlabError

load_dotenv()


def _flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class FuelConfig:
    """Search budgets"""
    fuel: int = int(os.getenv("ORDLAB_FUEL", 64))
    program_fuel: int = int(os.getenv("ORDLAB_PROGRAM_FUEL", 200_000))
    depth: int = int(os.getenv("ORDLAB_DEPTH", 8))


@dataclass
class OutputConfig:
    """Where artifacts and traces go"""
    out: str = os.getenv("ORDLAB_OUT", "out")
    trace: bool = _flag("ORDLAB_TRACE")
    seed_free: bool = _flag("ORDLAB_SEED_FREE", "1")


@dataclass
class LabConfig:
    """Stage machine settings"""
    stages: int = int(os.getenv("ORDLAB_STAGES", 30))
    bound: int = int(os.getenv("ORDLAB_BOUND", 40))
    exact_chain_limit: int = int(os.getenv("ORDLAB_EXACT_CHAIN_LIMIT", 16))


@dataclass
class RegistryConfig:
    """Program registry persistence"""
    path: str = os.getenv("ORDLAB_REGISTRY", os.path.join("out", "registry.jsonl"))


# config-file key -> (group, attribute, cast)
CONFIG_KEYS = {
    "FUEL": ("fuel", "fuel", int),
    "PROGRAM_FUEL": ("fuel", "program_fuel", int),
    "DEPTH": ("fuel", "depth", int),
    "OUT": ("output", "out", str),
    "TRACE": ("output", "trace", lambda v: v.strip().lower() in ("1", "true", "yes", "on")),
    "SEED_FREE": ("output", "seed_free", lambda v: v.strip().lower() in ("1", "true", "yes", "on")),
    "STAGES": ("lab", "stages", int),
    "BOUND": ("lab", "bound", int),
    "EXACT_CHAIN_LIMIT": ("lab", "exact_chain_limit", int),
    "REGISTRY": ("registry", "path", str),
}
"""
Keys accepted in a ``--config`` file (dotenv syntax). Each key mirrors a command-line flag.
"""


@dataclass
class Config:
    """Main configuration class"""
    fuel: FuelConfig = field(default_factory=FuelConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    lab: LabConfig = field(default_factory=LabConfig)
    registry: RegistryConfig = field(default_factory=RegistryConfig)

    @classmethod
    def from_file(cls, path: str) -> "Config":
        """
        Build a configuration from a dotenv-style file on top of the environment defaults.

        :param path: config file path
        :type path: str
        :return: the merged configuration
        :rtype: Config
        :raises OrdlabError: on a key outside CONFIG_KEYS
        """
        config = cls()
        values = dotenv_values(path)
        unknown = sorted(set(values) - set(CONFIG_KEYS))
        if unknown:
            raise OrdlabError(f"Unknown config keys in {path}", ", ".join(unknown))
        for key, raw in values.items():
            if raw is None:
                continue
            config = config.with_value(key, raw)
        return config

    def with_value(self, key: str, raw) -> "Config":
        group_name, attribute, cast = CONFIG_KEYS[key]
        group = getattr(self, group_name)
        value = cast(raw) if isinstance(raw, str) else raw
        return replace(self, **{group_name: replace(group, **{attribute: value})})

    def as_dict(self) -> dict:
        return {
            name.name: {f.name: getattr(getattr(self, name.name), f.name) for f in fields(getattr(self, name.name))}
            for name in fields(self)
        }
