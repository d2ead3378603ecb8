"""Exception types shared across the package.

Configuration mistakes (bad indices, non-unitary gates, inconsistent
shapes) raise the built-in ``ValueError``.  ``NumericsError`` is reserved
for diagnostics that indicate numerical corruption upstream, e.g. a state
whose norm has drifted beyond tolerance.
"""


class NumericsError(RuntimeError):
    """A numerical invariant was violated (normalization drift, etc.)."""
