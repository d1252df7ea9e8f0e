"""Tests for ConfigManager."""

import json
import logging
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

import pytest
import yaml

from core.config_manager import ConfigManager
from core.derivation import derive
from core.series import Series, mul
from models.types import GeneratorDecl, GeneratorKind, OutputMode, Preset, SessionConfig


class TestConfigManager:
    """Test ConfigManager functionality."""

    @pytest.mark.asyncio
    async def test_defaults_without_files(self, isolated_home: Path):
        config = await ConfigManager().load_config()

        assert config.preset is None
        assert config.c == "0"
        assert config.depth == 6
        assert config.output is OutputMode.TEXT
        assert config.sample_points == [10.0, 20.0, 40.0]

    @pytest.mark.asyncio
    async def test_init_config(self, isolated_home: Path):
        manager = ConfigManager()
        path = await manager.init_config()

        assert path == isolated_home / ".hahnrc"
        assert path.read_text().startswith("# hahn session configuration")
        config_data = yaml.safe_load(path.read_text())
        assert config_data["depth"] == 6
        assert config_data["output"] == "text"

        # an existing file is left alone
        assert await manager.init_config() is None

    @pytest.mark.asyncio
    async def test_load_config_yaml(self, isolated_home: Path):
        (isolated_home / ".hahnrc").write_text("preset: series\ndepth: 9\nc: 1/2\n")

        config = await ConfigManager().load_config()

        assert config.preset is Preset.SERIES
        assert config.depth == 9
        assert config.c == "1/2"

    @pytest.mark.asyncio
    async def test_load_config_json(self, isolated_home: Path):
        config_file = isolated_home / "session.json"
        config_file.write_text(json.dumps({"c": "2", "output": "json", "precision": 80}))

        config = await ConfigManager(config_file).load_config()

        assert config.c == "2"
        assert config.output is OutputMode.JSON
        assert config.precision == 80

    @pytest.mark.asyncio
    async def test_local_overrides_global(self, isolated_home: Path):
        global_dir = isolated_home / "home"
        global_dir.mkdir()
        (global_dir / ".hahnrc").write_text(yaml.dump({"depth": 3, "c": "5"}))
        (isolated_home / ".hahnrc").write_text(yaml.dump({"depth": 8}))

        manager = ConfigManager()
        manager.global_config_path = global_dir / ".hahnrc"
        config = await manager.load_config()

        assert config.depth == 8
        assert config.c == "5"

    @pytest.mark.asyncio
    async def test_environment_overrides_files(self, isolated_home: Path):
        (isolated_home / ".hahnrc").write_text(yaml.dump({"depth": 9, "c": "1"}))

        with patch.dict("os.environ", {"HAHN_DEPTH": "12", "HAHN_C": "3/2", "HAHN_PRESET": "series"}):
            config = await ConfigManager().load_config()

        assert config.depth == 12
        assert config.c == "3/2"
        assert config.preset is Preset.SERIES

    @pytest.mark.asyncio
    async def test_bad_environment_value_is_ignored(self, isolated_home: Path, caplog):
        with patch.dict("os.environ", {"HAHN_DEPTH": "deep"}):
            with caplog.at_level(logging.WARNING):
                config = await ConfigManager().load_config()

        assert config.depth == 6
        assert "HAHN_DEPTH" in caplog.text

    @pytest.mark.asyncio
    async def test_flags_override_everything(self, isolated_home: Path):
        with patch.dict("os.environ", {"HAHN_DEPTH": "12"}):
            config = await ConfigManager().load_config({"depth": 4, "c": None})

        assert config.depth == 4
        assert config.c == "0"

    @pytest.mark.asyncio
    async def test_config_validation_error(self, isolated_home: Path):
        (isolated_home / ".hahnrc").write_text(yaml.dump({"depth": -1, "c": "one"}))

        with pytest.raises(ValueError) as exc_info:
            await ConfigManager().load_config()

        assert "Invalid configuration" in str(exc_info.value)

    @pytest.mark.asyncio
    async def test_unreadable_local_file_is_ignored(self, isolated_home: Path, caplog):
        (isolated_home / ".hahnrc").write_text("depth: [6\n")

        with caplog.at_level(logging.WARNING):
            config = await ConfigManager().load_config()

        assert config.depth == 6
        assert "Ignoring unreadable configuration file" in caplog.text

    @pytest.mark.asyncio
    async def test_explicit_file_errors(self, isolated_home: Path):
        with pytest.raises(ValueError, match="not found"):
            await ConfigManager(isolated_home / "missing.yaml").load_config()

        broken = isolated_home / "broken.yaml"
        broken.write_text("depth: [6\n")
        with pytest.raises(ValueError, match="Invalid configuration file"):
            await ConfigManager(broken).load_config()

        listing = isolated_home / "list.yaml"
        listing.write_text("- 1\n- 2\n")
        with pytest.raises(ValueError, match="key-value pairs"):
            await ConfigManager(listing).load_config()

    @pytest.mark.asyncio
    async def test_save_config_merges(self, isolated_home: Path):
        manager = ConfigManager()
        await manager.save_config({"depth": 10})
        await manager.save_config({"c": "1"})

        saved = yaml.safe_load((isolated_home / ".hahnrc").read_text())
        assert saved == {"depth": 10, "c": "1"}


class TestContexts:
    """Test validation and context construction."""

    def test_validate_preset_and_generators(self):
        config = SessionConfig(preset="series", generators=[GeneratorDecl(name="a")])
        is_valid, errors = ConfigManager().validate_config(config)

        assert not is_valid
        assert "declare either a preset or generators, not both" in errors

    def test_validate_logderivs_and_rates(self):
        config = SessionConfig(
            generators=[
                GeneratorDecl(name="a", logderiv="-1"),
                GeneratorDecl(name="b", kind="exponential"),
            ]
        )
        is_valid, errors = ConfigManager().validate_config(config)

        assert not is_valid
        assert len(errors) == 2

    def test_validate_c(self):
        config = SessionConfig(preset="transseries", c="-1")
        assert not ConfigManager().validate_config(config)[0]

    def test_preset_context(self):
        context = ConfigManager().build_context(SessionConfig(c="1"))

        assert context.names == ("E", "X")
        assert context.generators[0].rate == Fraction(1, 2)
        assert context.derivation is not None

    def test_default_preset_is_used(self):
        context = ConfigManager().build_context(SessionConfig(), Preset.SERIES)
        assert context.names == ("t",)

    def test_declared_generators_without_derivation(self):
        config = SessionConfig(generators=[GeneratorDecl(name="a"), GeneratorDecl(name="b", weight="1/2")])
        context = ConfigManager().build_context(config)

        assert context.names == ("a", "b")
        assert context.generators[1].weight == Fraction(1, 2)
        assert context.derivation is None

    def test_declared_generators_with_derivation(self):
        config = SessionConfig(
            generators=[
                GeneratorDecl(name="E", kind="exponential", rate="1", logderiv="-1"),
                GeneratorDecl(name="X", kind="power", rate="1", logderiv="-X"),
            ]
        )
        context = ConfigManager().build_context(config)
        X = Series.generator(context, "X")

        assert context.generators[0].kind is GeneratorKind.EXPONENTIAL
        assert derive(X) == mul(X, X).scale(-1)

    def test_invalid_context(self):
        config = SessionConfig(preset="series", generators=[GeneratorDecl(name="a")])
        with pytest.raises(ValueError, match="Invalid configuration"):
            ConfigManager().build_context(config)
