"""Exception types raised across the package."""


class MomdError(Exception):
    """Base class for every error raised by momd."""


class EmptyGraph(MomdError):
    pass


class UnknownVertex(MomdError, KeyError):
    def __init__(self, vertex):
        super().__init__(vertex)
        self.vertex = vertex

    def __str__(self) -> str:
        return f"unknown vertex {self.vertex!r}"


class InvalidGraph(MomdError, ValueError):
    """Edge list violates a structural invariant (self-loop, bad weight, dangling endpoint)."""


class MalformedXml(MomdError):
    pass


class MissingNodeReference(MomdError):
    pass


class FormatViolation(MomdError):
    """A compact graph or OD file does not match its declared layout."""


class GraphTooSmall(MomdError):
    pass


class GraphTooLarge(MomdError):
    pass


class Disconnected(MomdError):
    pass


class DegeneratePath(MomdError):
    """Collapsed path too short to recover distinct endpoints from."""


class ConfigInvalid(MomdError, ValueError):
    pass


class MismatchedInputs(MomdError):
    pass
