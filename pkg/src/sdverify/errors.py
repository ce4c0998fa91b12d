"""Exception hierarchy shared by all sdverify modules.

I/O failures (unreadable paths, permission errors) are reported through the
built-in ``OSError`` family; everything the package itself detects derives
from :class:`SdverifyError`.
"""

from __future__ import annotations


class SdverifyError(Exception):
    """Base class for all errors raised by sdverify."""


class FormatError(SdverifyError):
    """A data file is readable but malformed.

    ``line`` is the 1-based line number for line-oriented formats, or None.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)


class DuplicateIdError(SdverifyError):
    """Two records claim the same identifier."""


class UnknownCommunityError(SdverifyError):
    """The requested community does not exist in the corpus."""


class UnknownMemberError(SdverifyError):
    """The requested member does not exist in the community."""


class ValidationError(SdverifyError):
    """A request or configuration value violates its contract."""


class UnknownCharacteristicError(ValidationError):
    """A characteristic id is not declared by the lexicon."""


class InvariantViolationError(SdverifyError):
    """A lexicon record violates a marker or lexicon invariant."""

    def __init__(self, reason: str, *, marker_id: str | None = None):
        self.marker_id = marker_id
        self.reason = reason
        prefix = f"marker {marker_id!r}: " if marker_id else ""
        super().__init__(prefix + reason)


class RegexError(SdverifyError):
    """A regex marker pattern does not compile."""

    def __init__(self, marker_id: str, detail: str):
        self.marker_id = marker_id
        super().__init__(f"marker {marker_id!r}: invalid regex: {detail}")


class DuplicateCharacteristicError(SdverifyError):
    """Two verdicts were supplied for the same characteristic."""


class EmptyVerdictsError(SdverifyError):
    """Member classification needs at least one verdict."""


class CoverageError(SdverifyError):
    """The lexicon lacks an embeddable marker for a needed value."""


class MissingTruthError(SdverifyError):
    """A verified member is absent from the ground-truth table."""

    def __init__(self, member_id: str):
        self.member_id = member_id
        super().__init__(f"no ground truth for member {member_id!r}")


class UnknownRunError(SdverifyError):
    """No persisted run record under the given id."""


class RunNotDoneError(SdverifyError):
    """The run exists but has not finished, so results are unavailable."""
