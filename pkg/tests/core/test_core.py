"""
Core functionality tests
"""
import pytest

from netdecode.core.config import Settings, settings
from netdecode.core.exceptions import (
    AmbiguousCodeError,
    CacheError,
    InstanceTooLargeError,
    NetDecodeException,
    PreconditionError,
    ScenarioError,
    ValidationError,
)


class TestSettings:
    """Test settings loading."""

    def test_defaults(self):
        """Test default values of the global settings."""
        assert settings.default_workers >= 1
        assert settings.decimals == 6
        assert settings.capacity_tolerance == pytest.approx(1e-6)

    def test_environment_override(self, monkeypatch):
        """Test that NETDECODE_* variables override defaults."""
        monkeypatch.setenv("NETDECODE_TIMEOUT", "12.5")
        monkeypatch.setenv("NETDECODE_WORKERS", "3")
        monkeypatch.setenv("NETDECODE_MAX_CANDIDATES", "100")
        monkeypatch.setenv("NETDECODE_LOG_LEVEL", "debug")

        custom = Settings()
        assert custom.default_timeout == 12.5
        assert custom.default_workers == 3
        assert custom.max_candidates == 100
        # Level names are normalized
        assert custom.log_level == "DEBUG"

    def test_empty_log_file_means_none(self, monkeypatch):
        """Test that an empty log file variable disables file logging."""
        monkeypatch.setenv("NETDECODE_LOG_FILE", "")
        assert Settings().log_file is None


class TestExceptions:
    """Test custom exceptions."""

    def test_base_exception(self):
        """Test the base exception fields."""
        error = NetDecodeException("boom", code=418, details={"k": 1})
        assert error.message == "boom"
        assert error.code == 418
        assert error.details == {"k": 1}
        assert str(error) == "boom"

    @pytest.mark.parametrize(
        "cls,code",
        [
            (ValidationError, 400),
            (ScenarioError, 422),
            (InstanceTooLargeError, 413),
            (AmbiguousCodeError, 409),
            (PreconditionError, 412),
            (CacheError, 500),
        ],
    )
    def test_codes(self, cls, code):
        """Test the code carried by each subclass."""
        error = cls("message")
        assert isinstance(error, NetDecodeException)
        assert error.code == code

    def test_default_messages(self):
        """Test default messages where the subclass provides one."""
        assert InstanceTooLargeError().message == "Instance too large"
        assert AmbiguousCodeError().message == "Ambiguous code"
        assert ScenarioError().message == "Invalid scenario"
