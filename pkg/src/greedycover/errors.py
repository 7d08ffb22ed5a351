"""Exception types shared across the package."""


class GreedyCoverError(Exception):
    """Base class for all errors raised by greedycover."""


class LatticeError(GreedyCoverError):
    """A structural problem with a lattice (missing join, undefined phi, ...)."""


class BudgetExceeded(GreedyCoverError):
    """An exhaustive scan would exceed its configured work budget."""


class DualUnbounded(GreedyCoverError):
    """The dual can be raised forever: a positive-rank row has no usable element.

    This certifies that the (truncated) covering program has no feasible point.
    """

    def __init__(self, row, rank):
        self.row = row
        self.rank = rank
        super().__init__(f"row {sorted(row)} has rank {rank} but no element can absorb a raise")


class InstanceError(GreedyCoverError):
    """An instance file or in-memory instance is malformed."""
