"""Exception types shared across the library.

Input problems (bad descriptors, malformed files, mismatched sites,
violated preconditions) raise subclasses of :class:`UsageError`.
:class:`InternalCheckError` signals a failed self-check inside an
operation whose result is asserted valid; it should never fire unless
there is a bug or a site whose action is not lattice-compatible.
"""


class TransferSystemsError(Exception):
    """Base class for all library errors."""


class UsageError(TransferSystemsError):
    """Invalid input: descriptor, file, argument, or precondition."""


class DescriptorError(UsageError):
    """Malformed or unsupported group/site descriptor."""


class InputFileError(UsageError):
    """Malformed Cayley-table, permutation, or poset file."""


class CapExceededError(UsageError):
    """A configured resource cap (order, subgroup count, enumeration) was hit."""


class MismatchedSitesError(UsageError):
    """Two values that must live on the same site do not."""


class NotNormalError(UsageError):
    """Operation requires a normal subgroup."""


class DisklikeRequiredError(UsageError):
    """Operation requires a disklike transfer system."""


class GroupSiteRequiredError(UsageError):
    """Operation is defined only for group-derived sites."""


class InternalCheckError(TransferSystemsError):
    """A result failed its own validity assertion."""
