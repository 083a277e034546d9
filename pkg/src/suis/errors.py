"""Exception hierarchy shared across the library, service, and CLI."""


class SuisError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SuisError):
    """Caller-supplied data is out of range or structurally invalid."""


class ConfigError(SuisError):
    """System configuration is missing, inconsistent, or unusable."""


class UserNotFoundError(SuisError):
    """No profile exists for the requested username."""


class DuplicateUserError(SuisError):
    """A profile already exists for the requested username."""


class StorageError(SuisError):
    """The persistence backend failed."""


class RecordCorruptionError(SuisError):
    """A stored record is damaged, tampered with, or internally inconsistent."""


class MalformedRecordError(RecordCorruptionError):
    """A serialized payload does not decode under its claimed technique."""


class IntegrityError(RecordCorruptionError):
    """Authenticated decryption failed: wrong key or modified bytes."""


class TechniqueMismatchError(RecordCorruptionError):
    """The profile technique disagrees with the technique embedded in the record."""


class TransportError(SuisError):
    """A remote target could not be reached or answered unusably."""
