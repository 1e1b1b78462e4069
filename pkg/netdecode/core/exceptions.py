"""
Custom exceptions for netdecode
"""
from typing import Any, Dict, Optional


class NetDecodeException(Exception):
    """Base exception class"""

    def __init__(self, message: str, code: int = 500, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.code = code
        self.details = details
        super().__init__(self.message)


class ValidationError(NetDecodeException):
    """Invalid argument or violated precondition on an input value"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code=400, details=details)


class ScenarioError(NetDecodeException):
    """Scenario file could not be parsed or resolved"""

    def __init__(self, message: str = "Invalid scenario", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code=422, details=details)


class InstanceTooLargeError(NetDecodeException):
    """An enumeration guard was exceeded"""

    def __init__(self, message: str = "Instance too large", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code=413, details=details)


class AmbiguousCodeError(NetDecodeException):
    """Two codewords share a terminal output"""

    def __init__(self, message: str = "Ambiguous code", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code=409, details=details)


class PreconditionError(NetDecodeException):
    """Hypotheses of an operation are not met"""

    def __init__(self, message: str = "Precondition failed", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code=412, details=details)


class CacheError(NetDecodeException):
    """Results cache could not be read or written"""

    def __init__(self, message: str = "Cache error", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, code=500, details=details)
