"""Configuration management for engine sessions."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from models.types import GeneratorDecl, GeneratorKind, Preset, SessionConfig

from .derivation import install_derivation
from .monomial import Generator, GeneratorContext
from .parser import evaluate
from .presets import build_preset
from .rational import to_fraction

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_HEADER = """\
# hahn session configuration
# preset: series | transseries (c is the transseries parameter)
# generators: list of {name, weight, kind, rate, logderiv}, in dominance order
# output: text | json; precision: decimal digits for numeric checks
"""


class ConfigManager:
    """Loads session configuration from files, the environment and flags."""

    def __init__(self, config_path: Optional[Path] = None):
        """Initialize config manager.

        Args:
            config_path: Explicit configuration file (``--config``); read
                after the global and local ``.hahnrc`` files.
        """
        self.config_filename = ".hahnrc"
        self.global_config_path = Path.home() / self.config_filename
        self.local_config_path = Path.cwd() / self.config_filename
        self.explicit_config_path = config_path

        # Load environment variables
        load_dotenv()

    async def load_config(self, overrides: Optional[Dict[str, Any]] = None) -> SessionConfig:
        """Load configuration: defaults, ~/.hahnrc, ./.hahnrc, --config, env, flags."""
        config_data = self._get_default_config()

        for path in (self.global_config_path, self.local_config_path):
            file_config = await self._load_config_file(path)
            if file_config:
                config_data.update(file_config)

        if self.explicit_config_path is not None:
            if not self.explicit_config_path.exists():
                raise ValueError(f"Configuration file not found: {self.explicit_config_path}")
            explicit = await self._load_config_file(self.explicit_config_path, strict=True)
            config_data.update(explicit or {})

        config_data.update(self._load_env_config())
        config_data.update({k: v for k, v in (overrides or {}).items() if v is not None})

        try:
            return SessionConfig(**config_data)
        except ValidationError as e:
            raise ValueError(f"Invalid configuration: {e}")

    async def save_config(self, config: Dict[str, Any], global_config: bool = False) -> None:
        """Merge ``config`` into the local (or global) ``.hahnrc``."""
        target_path = self.get_config_path(global_config)
        existing_config = await self._load_config_file(target_path) or {}
        existing_config.update(config)
        await self._save_config_file(target_path, existing_config)

    async def init_config(self) -> Optional[Path]:
        """Write a default ``./.hahnrc``; returns None when one already exists."""
        if self.local_config_path.exists():
            return None
        await self._save_config_file(
            self.local_config_path, self._get_default_config(), header=DEFAULT_CONFIG_HEADER
        )
        return self.local_config_path

    def validate_config(self, config: SessionConfig) -> Tuple[bool, List[str]]:
        """Validate cross-field constraints pydantic does not check.

        Returns:
            Tuple of (is_valid, error_messages)
        """
        errors = []

        if config.generators and config.preset is not None:
            errors.append("declare either a preset or generators, not both")

        if config.preset is Preset.TRANSSERIES and to_fraction(config.c) <= -1:
            errors.append("transseries(c) needs c > -1")

        declared = [g.logderiv is not None for g in config.generators]
        if any(declared) and not all(declared):
            errors.append("either every generator declares a logderiv or none does")

        for g in config.generators:
            if g.kind is not GeneratorKind.PLAIN and g.rate is None:
                errors.append(f"{g.kind.value} generator {g.name!r} needs a rate")

        return len(errors) == 0, errors

    def get_config_path(self, global_config: bool = False) -> Path:
        """Get path to configuration file."""
        return self.global_config_path if global_config else self.local_config_path

    def build_context(
        self, config: SessionConfig, default_preset: Preset = Preset.TRANSSERIES
    ) -> GeneratorContext:
        """Generator context (with derivation, if declared) for a session."""
        is_valid, errors = self.validate_config(config)
        if not is_valid:
            raise ValueError(f"Invalid configuration: {'; '.join(errors)}")

        if not config.generators:
            return build_preset(config.preset or default_preset, config.c)

        context = GeneratorContext([_generator(g) for g in config.generators])
        if config.generators[0].logderiv is not None:
            install_derivation(
                context,
                {g.name: evaluate(g.logderiv or "0", context) for g in config.generators},
            )
        logger.debug("built context %r from %d declarations", context, len(config.generators))
        return context

    async def _load_config_file(
        self, path: Path, strict: bool = False
    ) -> Optional[Dict[str, Any]]:
        """Load configuration from a YAML (or JSON) file."""
        if not path.exists():
            return None

        try:
            content = path.read_text(encoding='utf-8')

            # Try YAML first, then JSON
            try:
                data = yaml.safe_load(content)
            except yaml.YAMLError:
                data = json.loads(content)

        except (json.JSONDecodeError, yaml.YAMLError, OSError) as e:
            if strict:
                raise ValueError(f"Invalid configuration file {path}: {e}")
            logger.warning("Ignoring unreadable configuration file %s: %s", path, e)
            return None

        if data is None:
            return {}
        if not isinstance(data, dict):
            if strict:
                raise ValueError(f"Invalid configuration file {path}: expected key-value pairs")
            return None
        return data

    async def _save_config_file(
        self, path: Path, config: Dict[str, Any], header: str = ""
    ) -> None:
        """Save configuration to file."""
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            content = header + yaml.dump(config, default_flow_style=False, sort_keys=True)
            path.write_text(content, encoding='utf-8')

        except OSError as e:
            raise ValueError(f"Failed to save configuration: {e}")

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration."""
        defaults = SessionConfig()
        return {
            "c": defaults.c,
            "depth": defaults.depth,
            "output": defaults.output.value,
            "sample_points": list(defaults.sample_points),
            "precision": defaults.precision,
        }

    def _load_env_config(self) -> Dict[str, Any]:
        """Load configuration from environment variables."""
        config: Dict[str, Any] = {}

        env_mappings = {
            "HAHN_PRESET": "preset",
            "HAHN_C": "c",
            "HAHN_OUTPUT": "output",
            "HAHN_DEPTH": ("depth", int),
            "HAHN_PRECISION": ("precision", int),
        }

        for env_var, config_key in env_mappings.items():
            value = os.getenv(env_var)
            if value:
                if isinstance(config_key, tuple):
                    key, converter = config_key
                    try:
                        config[key] = converter(value)
                    except (ValueError, TypeError):
                        logger.warning("Ignoring %s=%r: not a valid value", env_var, value)
                else:
                    config[config_key] = value

        return config


def _generator(decl: GeneratorDecl) -> Generator:
    return Generator(
        name=decl.name,
        weight=to_fraction(decl.weight),
        kind=decl.kind,
        rate=None if decl.rate is None else to_fraction(decl.rate),
    )
