import pytest

from harmonic_census.config import get_settings
from harmonic_census.exceptions import InvalidParameterError


def test_defaults(monkeypatch):
    monkeypatch.delenv("HARMONIC_CENSUS_THREADS", raising=False)
    monkeypatch.delenv("HARMONIC_CENSUS_LOG_LEVEL", raising=False)
    settings = get_settings()
    assert settings.threads is None
    assert settings.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("HARMONIC_CENSUS_THREADS", "4")
    monkeypatch.setenv("HARMONIC_CENSUS_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.threads == 4
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("raw", ["many", "0", "-2"])
def test_bad_thread_count(monkeypatch, raw):
    monkeypatch.setenv("HARMONIC_CENSUS_THREADS", raw)
    with pytest.raises(InvalidParameterError):
        get_settings()


def test_bad_log_level(monkeypatch):
    monkeypatch.delenv("HARMONIC_CENSUS_THREADS", raising=False)
    monkeypatch.setenv("HARMONIC_CENSUS_LOG_LEVEL", "LOUD")
    with pytest.raises(ValueError):
        get_settings()
