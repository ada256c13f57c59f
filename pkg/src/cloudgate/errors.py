"""Exception hierarchy shared across the workbench."""


class CloudgateError(Exception):
    """Base class for all workbench errors."""


class DatasetError(CloudgateError):
    """The repository dataset cannot be loaded or fails validation."""


class MalformedIdError(CloudgateError):
    """An identifier is not G/O/T/S-shaped."""


class NotFoundError(CloudgateError):
    """A well-formed identifier has no entry in the catalogue."""


class ModelError(CloudgateError):
    """A goal-model operation violated its precondition."""


class SessionError(CloudgateError):
    """A session-level operation failed; the session is unchanged."""


class ParseError(CloudgateError):
    """Model-text error carrying a 1-based source location."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class SessionDocumentError(CloudgateError):
    """A session document violates the persistence schema."""


class StaleRevisionError(SessionError):
    """A mutation carried a revision that is no longer current."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"stale revision {got}, current is {expected}")
