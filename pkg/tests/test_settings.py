import json
import logging

import pytest

from relhyp_hub.core.development import TreeDevelopment
from relhyp_hub.decorators import log_action
from relhyp_hub.infra.settings import SettingsLoader, SingletonMeta
from relhyp_hub.logging_config import JsonFormatter, setup_logging


def test_defaults_without_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    settings = SettingsLoader()
    assert settings.coset_budget == 500
    assert settings.layout_child_scale == pytest.approx(0.35)
    assert "delta0" in settings


def test_settings_is_singleton():
    assert SettingsLoader() is SettingsLoader()
    SingletonMeta.reset(SettingsLoader)
    assert SettingsLoader().to_dict() == SettingsLoader().to_dict()


def test_pyproject_section_is_read(tmp_path, monkeypatch):
    (tmp_path / "pyproject.toml").write_text("[tool.relhyp]\ncoset_budget = 7\nlog_level = \"DEBUG\"\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    settings = SettingsLoader()
    assert settings.coset_budget == 7
    assert settings.log_level == "DEBUG"
    assert settings.todd_coxeter_max_cosets == 20000


def test_json_config(tmp_path):
    path = tmp_path / "relhyp_config.json"
    path.write_text(json.dumps({"default_sample_count": 11}), encoding="utf-8")
    settings = SettingsLoader(str(path))
    assert settings.default_sample_count == 11
    settings["default_sample_count"] = 12
    assert settings.get("default_sample_count") == 12


def test_development_reads_coset_budget(mocker, amalgam_cog):
    mocker.patch.object(SettingsLoader, "coset_budget", new_callable=mocker.PropertyMock, return_value=3)
    dev = TreeDevelopment(amalgam_cog, bound=2, radius=1)
    assert dev.budget == 3
    assert dev.object_count == 3


def test_log_action_records_start_and_finish(caplog):
    @log_action("SQUARE")
    def square(x, radius=None):
        return x * x

    with caplog.at_level(logging.INFO, logger="relhyp"):
        assert square(3, radius=2) == 9
    messages = [r.getMessage() for r in caplog.records if r.name == "relhyp.actions"]
    assert messages == ["Начало действия: SQUARE", "Завершение действия: SQUARE"]
    finish = caplog.records[-1]
    assert finish.result == "OK"
    assert finish.param_radius == 2


def test_log_action_reraises(caplog):
    @log_action()
    def explode():
        raise ValueError("boom")

    with caplog.at_level(logging.INFO, logger="relhyp"), pytest.raises(ValueError):
        explode()
    error = [r for r in caplog.records if r.levelno == logging.ERROR][0]
    assert error.error_type == "ValueError"
    assert "EXPLODE" in error.getMessage()


def test_json_formatter_keeps_extra_fields():
    record = logging.LogRecord("relhyp.test", logging.INFO, __file__, 1, "готово", None, None)
    record.result = "OK"
    record.param_seed = 3
    data = json.loads(JsonFormatter().format(record))
    assert data["message"] == "готово"
    assert data["result"] == "OK"
    assert data["param_seed"] == 3


def test_setup_logging_writes_to_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    SettingsLoader().set("logs_dir", str(tmp_path / "logs"))
    logger = logging.getLogger("relhyp")
    saved = (list(logger.handlers), logger.propagate, logger.level)
    try:
        setup_logging()
        logging.getLogger("relhyp.test").info("запись в файл")
        for handler in logger.handlers:
            handler.flush()
        assert "запись в файл" in (tmp_path / "logs" / "relhyp.log").read_text(encoding="utf-8")
    finally:
        for handler in logger.handlers:
            handler.close()
        logger.handlers[:] = saved[0]
        logger.propagate = saved[1]
        logger.setLevel(saved[2])
