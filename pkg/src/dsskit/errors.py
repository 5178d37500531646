"""Exception types shared across the package."""


class DsskitError(Exception):
    """Base class for all dsskit errors."""


class DomainError(DsskitError):
    """A scalar argument lies outside its mathematical domain."""


class RangeError(DsskitError):
    """An integer element or size is outside its permitted range."""


class OverlapError(DsskitError):
    """Two member sets of a DSS share an element."""

    def __init__(self, element, set_a, set_b):
        self.element = element
        self.set_a = set_a
        self.set_b = set_b
        super().__init__(
            f"element {element} appears in both set {set_a} and set {set_b}"
        )


class ArityError(DsskitError):
    """The number of member sets disagrees with the declared alphabet size."""


class LengthMismatch(DsskitError):
    """A sequence argument has the wrong length."""


class PayloadLengthError(DsskitError):
    """An encoder payload has the wrong number of symbols."""


class WindowTooShort(DsskitError):
    """A synchronization window is shorter than one frame."""


class WindowLengthError(DsskitError):
    """A phase-detection window does not have the exact required length."""


class EccFailure(DsskitError):
    """The block code could not decode (too many payload errors)."""


class TooLarge(DsskitError):
    """A brute-force enumeration would exceed its feasibility guard."""


class CapacityError(DsskitError):
    """Requested frame count exceeds the payload capacity of the block code."""


class TargetUnreached(DsskitError):
    """Retry construction exhausted its budget below the target index.

    Carries the best attempt found so far in ``best``.
    """

    def __init__(self, best, target, attempts):
        self.best = best
        self.target = target
        self.attempts = attempts
        super().__init__(
            f"no construction reached index {target} in {attempts} attempts "
            f"(best achieved: {best.achieved_index})"
        )


class DecodeFailure(DsskitError):
    """Phase decoding failed; ``reason`` is 'alignment' or 'ecc'."""

    def __init__(self, reason, message):
        self.reason = reason
        super().__init__(message)


class DegenerateConstructionWarning(UserWarning):
    """Construction was forced to leave some member sets empty (r < q)."""
