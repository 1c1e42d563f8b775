"""Exception types shared across the package."""


class ArchitectureError(ValueError):
    """An architecture description is structurally invalid (odd width, bad permutation, ...)."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed the configured memory cap.

    Raised before allocating; the message names the offending 2**n (or 4**n)
    requirement so callers can adjust the cap deliberately.
    """
