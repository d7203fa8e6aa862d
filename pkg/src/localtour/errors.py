"""Exception types shared across the library."""

from __future__ import annotations


class DigraphError(ValueError):
    """Invalid digraph input or violated operation precondition."""


class NotOrientedError(DigraphError):
    """The digraph contains a 2-cycle where an oriented graph is required."""


class NotTournamentError(DigraphError):
    """A tournament was required."""


class NotLocalTournamentError(DigraphError):
    """A local tournament was required."""


class NotStrongError(DigraphError):
    """A strongly connected digraph was required."""


class NotConnectedError(DigraphError):
    """A (weakly) connected digraph was required."""


class EnumerationCapError(DigraphError):
    """An exhaustive enumeration was requested above its size cap."""


class GenerationError(RuntimeError):
    """A randomized generator exhausted its attempt budget."""


class EdgeListParseError(ValueError):
    """Malformed edge-list text.  Carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TheoremViolation(RuntimeError):
    """A property the theory guarantees failed on a concrete instance.

    Constructive witness finders run in checked mode: every intermediate
    fact the underlying argument predicts is re-tested on the actual
    digraph.  A failure means either an implementation bug or a genuine
    counterexample; the campaign harness tells the two apart by whether
    the brute-force oracle agrees with the finder.
    """

    def __init__(self, tag: str, **details):
        self.tag = tag
        self.details = details
        extra = f" {details}" if details else ""
        super().__init__(f"{tag}{extra}")
