"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`PotbalError`.
Violations of an operation's input contract derive from
:class:`PreconditionError`; the CLI maps the whole family to exit status 3.
"""

from __future__ import annotations


class PotbalError(Exception):
    """Base class for library errors."""


class PreconditionError(PotbalError, ValueError):
    """An input does not satisfy the contract of the operation."""


class PartialLineOverlap(PreconditionError):
    """A vertical line mass crosses the boundary of a region."""


class LinePresent(PreconditionError):
    """The operation is defined for purely atomic charges only."""


class LineInSweptRegion(PreconditionError):
    """A line mass lies in the open half-plane being swept."""


class SignedInput(PreconditionError):
    """A mass distribution (nonnegative charge) was required."""


class LeftHalfPlanePoint(PreconditionError):
    """A point with negative real part was given to a right half-plane kernel."""


class OriginPoint(PreconditionError):
    """The origin was given to a kernel that is singular there."""


class OriginInSupport(PreconditionError):
    """The charge has an atom at the origin."""


class BlaschkeViolated(PreconditionError):
    """The right half-plane part of the charge has an infinite Blaschke sum."""


class NoSuchLine(PreconditionError):
    """A boundary charge has no component on the requested line."""


class SupportViolation(PreconditionError):
    """An atom lies outside the admissible support region."""


class UnboundedSup(PreconditionError):
    """A supremum that must be finite is not."""


class ConditionMuRhFailed(PreconditionError):
    """The left-versus-right logarithmic balance condition does not hold."""


class LindelofFailed(PreconditionError):
    """A Lindelöf-type boundedness check failed."""


class IncomparableProfiles(PreconditionError):
    """Two radius profiles are not ordered pointwise."""


class QuadratureFailure(PotbalError, ArithmeticError):
    """Adaptive quadrature could not reach its tolerance within budget."""


class PostconditionFailed(PotbalError, AssertionError):
    """A construction produced an output that fails its own verification."""
