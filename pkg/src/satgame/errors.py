"""Exception types shared across the package."""


class SatGameError(ValueError):
    """Base class for every error raised by :mod:`satgame`."""


class EdgeNotInHost(SatGameError):
    pass


class EdgeAlreadyPresent(SatGameError):
    pass


class HostOrderMismatch(SatGameError):
    pass


class PositionNotFree(SatGameError):
    pass


class PositionSaturated(SatGameError):
    pass


class PolicyHostMismatch(SatGameError):
    pass


class RandomPolicyNotCertifiable(SatGameError):
    pass


class HostNotBipartite(SatGameError):
    pass


class OutOfTheoremRange(SatGameError):
    pass


class NodeBudgetExceeded(SatGameError):
    """Raised when a solve runs out of node or memo budget.

    ``lower`` and ``upper`` bracket the root value using only the root
    children that were fully solved before the budget ran out.
    """

    def __init__(self, nodes: int, memo_entries: int, lower: int, upper: int):
        self.nodes = nodes
        self.memo_entries = memo_entries
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"budget exceeded after {nodes} nodes ({memo_entries} memo entries); "
            f"value in [{lower}, {upper}] (inexact)"
        )
