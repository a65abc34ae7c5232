"""
Exception hierarchy shared by the engines, the sweep harness and both front ends.

Library code raises these; only cli.py and app.py decide how a failure is shown.
"""


class SplitLabError(Exception):
    """Base class for every error raised by this project."""


class GraphFormatError(SplitLabError, ValueError):
    """An edge-list document could not be turned into a simple graph."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class MalformedLineError(GraphFormatError):
    """A line is not two integers (or the header is not 'n m')."""


class EndpointRangeError(GraphFormatError):
    """An edge endpoint lies outside 1..n."""


class DuplicateEdgeError(GraphFormatError):
    """The same unordered pair is listed twice."""


class LoopError(GraphFormatError):
    """An edge joins a vertex to itself."""


class IdealFormatError(SplitLabError, ValueError):
    """A monomial or ideal document could not be parsed."""


class CapExceededError(SplitLabError):
    """A size guard refused the computation."""

    def __init__(self, cap_name, value, limit):
        self.cap_name = cap_name
        self.value = value
        self.limit = limit
        # every constructor argument goes to args so worker processes can pickle it back
        super().__init__(cap_name, value, limit)

    def __str__(self):
        return f"{self.cap_name} exceeded: {self.value} > {self.limit}"


class HypothesisError(SplitLabError, ValueError):
    """A formula was asked for outside the hypothesis it is stated under."""


class NotASplittingError(SplitLabError, ValueError):
    """The operation needs a valid splitting map and did not get one."""


class InvariantBreachError(SplitLabError):
    """An internal consistency tripwire failed."""
