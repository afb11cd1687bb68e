"""Exception hierarchy shared by all modules."""


class RefocusError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RefocusError, ValueError):
    pass


class SizeLimitError(RefocusError, ValueError):
    pass


class InvalidParameterError(RefocusError, ValueError):
    pass


class NoHadamardOrderError(RefocusError, ValueError):
    def __init__(self, order: int, smallest: int | None):
        self.order = order
        self.smallest = smallest
        if smallest is None:
            msg = f"no Hadamard matrix of order {order} is available (largest supported order is 48)"
        else:
            msg = f"no Hadamard matrix of order {order}; smallest admissible order >= {order} is {smallest}"
        super().__init__(msg)


class GraphError(RefocusError, ValueError):
    pass


class InvalidPinError(RefocusError, ValueError):
    pass


class TargetError(RefocusError, ValueError):
    pass


class CapacityError(RefocusError, ValueError):
    pass


class DimensionError(RefocusError, ValueError):
    pass
