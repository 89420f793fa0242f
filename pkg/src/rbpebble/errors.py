"""Exception taxonomy for the pebbling model.

Every error raised by this package derives from :class:`PebbleError`, so
callers can catch one base class.  Parse failures on external files derive
from :class:`PebbleParseError` (the CLI maps them to exit code 2, semantic
failures to exit code 1).
"""

from __future__ import annotations


class PebbleError(Exception):
    """Base class for all errors raised by this package."""


class PebbleParseError(PebbleError):
    """Malformed external input (DAG file, trace file, graph file)."""


# ---------------------------------------------------------------------------
# DAG construction


class CycleError(PebbleError):
    """The edge list contains a directed cycle."""


class RangeError(PebbleError):
    """A node id is outside range(n)."""


class DuplicateEdgeError(PebbleError):
    """The same directed edge was given twice."""


class NotASourceError(PebbleError):
    """A chain-attachment target is not a source node."""


# ---------------------------------------------------------------------------
# Rule application


class PreconditionError(PebbleError):
    """A rule's pebble preconditions are not met (missing red/blue pebble)."""


class BudgetError(PebbleError):
    """A red set would exceed the fast-memory capacity r."""


class VariantError(PebbleError):
    """The rule is not available under the active game variant."""


class InjectivityError(PebbleError):
    """A shade (or direct-send endpoint) is used twice in one step."""


# ---------------------------------------------------------------------------
# Strategies / solving


class InvalidStrategyError(PebbleError):
    """Cost was requested for a strategy that does not replay cleanly."""


class InfeasibleError(PebbleError):
    """No valid pebbling exists for the instance (r too small)."""


class WitnessUnavailableError(PebbleError):
    """No hand-built witness strategy exists for the requested case."""


class MismatchError(PebbleError):
    """Artifact, instance, or certificate do not fit each other."""


class MetadataError(PebbleError):
    """Generator metadata is missing or inconsistent."""


class ParamError(PebbleError):
    """Construction or solver parameters are out of the supported range."""


class NotCubicError(PebbleError):
    """The reduction input graph is not 3-regular."""


class DivisibilityError(PebbleError):
    """A construction size parameter violates a divisibility requirement."""


class DomainError(PebbleError):
    """A bound formula was evaluated outside its domain."""
