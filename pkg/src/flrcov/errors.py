"""Exception types raised across flrcov."""


class DimensionError(ValueError):
    """Arrays do not share a grid or have the wrong shape."""


class InsufficientSampleError(ValueError):
    """Too few curves for the requested operation."""


class LagOutOfRangeError(ValueError):
    """Requested autocovariance lag is not available from the sample."""


class DegenerateInputError(ValueError):
    """Input makes a formula undefined (for example a zero denominator)."""


class UnsupportedKernelError(ValueError):
    """Operation is not defined for the given weight function family."""
