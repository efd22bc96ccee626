import logging

from src.config import DEFAULT_EXHAUSTIVE_CAP, load_settings, setup_logging


def test_defaults_without_file(tmp_path):
    settings = load_settings(tmp_path / "missing.json")
    assert settings["exhaustive_cap"] == DEFAULT_EXHAUSTIVE_CAP
    assert settings["oracle_seeds"] == [0, 1, 2]
    assert settings["log_level"] == "WARNING"


def test_overrides_merge(tmp_path, caplog):
    path = tmp_path / "settings.json"
    path.write_text('{"exhaustive_cap": 8, "colour": "blue"}', encoding="utf-8")
    with caplog.at_level(logging.WARNING, logger="src.config"):
        settings = load_settings(path)
    assert settings["exhaustive_cap"] == 8
    assert settings["oracle_powers"] == [1e6, 1e10]
    assert "colour" not in settings
    assert "colour" in caplog.text


def test_broken_file_falls_back(tmp_path, caplog):
    path = tmp_path / "settings.json"
    path.write_text("[1, 2", encoding="utf-8")
    with caplog.at_level(logging.WARNING, logger="src.config"):
        assert load_settings(path)["exhaustive_cap"] == DEFAULT_EXHAUSTIVE_CAP
    assert caplog.records


def test_non_object_file_falls_back(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text("[1, 2]", encoding="utf-8")
    assert load_settings(path)["log_level"] == "WARNING"


def test_setup_logging_level():
    setup_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
    setup_logging("no-such-level")
    assert logging.getLogger().level == logging.WARNING
    setup_logging(logging.INFO)
    assert logging.getLogger().level == logging.INFO
