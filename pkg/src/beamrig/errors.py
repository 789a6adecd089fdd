"""Exception hierarchy shared by all beamrig modules."""


class BeamRigError(Exception):
    """Base class for all beamrig errors."""


class ConfigurationError(BeamRigError):
    """Invalid configuration value (pin map, codebook size, SSB config, ...)."""


class CodebookError(BeamRigError, LookupError):
    """Unknown or out-of-range beam id."""


class RegisterError(BeamRigError, KeyError):
    """Write to a register the transceiver does not expose."""


class OrderingError(BeamRigError):
    """Event timestamp regressed behind the transaction log."""


class ParseError(BeamRigError, ValueError):
    """Malformed textual input (bitmaps, scenario files, bus frames)."""


class DomainError(BeamRigError, ValueError):
    """Numeric argument outside the function's domain."""


class SelectionError(BeamRigError):
    """Selection requested over an empty measurement set."""


class TopicError(BeamRigError, ValueError):
    """Malformed bus topic or subscription pattern."""


class ValidationError(BeamRigError):
    """Scenario document failed validation; `field` names the offending path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
