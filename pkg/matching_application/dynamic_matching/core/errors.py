"""
Exceptions raised by the dynamic matching engine
"""


class MatchingError(ValueError):
    """Base class for every error raised by the matching package"""


class InvalidConfigError(MatchingError):
    """Vertex count or threshold out of range"""


class GraphUpdateError(MatchingError):
    """Self-loop, duplicate edge, absent edge or out-of-range vertex"""


class PreconditionError(MatchingError):
    """A procedure or state primitive was called outside its contract"""


class WorkloadError(MatchingError):
    """Malformed or non-replayable update sequence"""

    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class OracleTooLargeError(MatchingError):
    """Instance exceeds the brute-force oracle guard"""


class EpochError(MatchingError):
    """Inconsistent epoch event stream"""


class LiveEpochError(EpochError):
    """Classification requested while the representative epoch is still live"""
