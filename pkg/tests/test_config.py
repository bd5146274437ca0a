import pytest

from config import Config, ConfigError

ENV_NAMES = ("TWORAY_LOG_LEVEL", "TWORAY_VERIFY_BUDGET", "TWORAY_PATH_BUDGET", "TWORAY_WORKERS")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    config = Config.from_env()
    assert config.log_level == "WARNING"
    assert config.verify_budget == 400
    assert config.path_budget == 20000
    assert config.workers == 1


def test_env_override(monkeypatch):
    monkeypatch.setenv("TWORAY_LOG_LEVEL", "debug")
    monkeypatch.setenv("TWORAY_VERIFY_BUDGET", "50")
    monkeypatch.setenv("TWORAY_WORKERS", "4")
    config = Config.from_env()
    assert config.log_level == "DEBUG"
    assert config.verify_budget == 50
    assert config.workers == 4
    assert "verify_budget=50" in repr(config)


def test_blank_value_falls_back_to_default(monkeypatch):
    monkeypatch.setenv("TWORAY_PATH_BUDGET", "  ")
    assert Config.from_env().path_budget == 20000


def test_non_numeric_value(monkeypatch):
    monkeypatch.setenv("TWORAY_WORKERS", "many")
    with pytest.raises(ConfigError, match="TWORAY_WORKERS"):
        Config.from_env()


def test_all_errors_are_collected():
    with pytest.raises(ConfigError) as exc:
        Config(log_level="LOUD", verify_budget=-1, workers=0)
    message = str(exc.value)
    assert "LOG_LEVEL" in message
    assert "VERIFY_BUDGET" in message
    assert "WORKERS" in message


def test_bad_env_config_exits_with_usage_code(monkeypatch, tmp_path):
    from main import run

    monkeypatch.setenv("TWORAY_LOG_LEVEL", "LOUD")
    assert run(["census", str(tmp_path / "e1.json")]) == 2
