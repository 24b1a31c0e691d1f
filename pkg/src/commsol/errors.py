"""Exception hierarchy shared by all commsol modules.

Every domain failure raises a subclass of CommsolError so that the CLI can
map it to exit code 1; anything else escaping is a bug.
"""


class CommsolError(Exception):
    """Base class for all expected failures."""


class ParseError(CommsolError):
    """Malformed text input (words, lattices, subgroups, commensurations)."""


class InfiniteIndexError(CommsolError):
    """A construction produced a subgroup of infinite index."""


class PreconditionError(CommsolError):
    """An operation was called outside its declared domain."""


class ResourceLimitError(CommsolError):
    """A computation exceeded the configured work cap."""
