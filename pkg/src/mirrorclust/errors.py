"""Exception types shared across the package."""
from __future__ import annotations

import numpy as np


class MirrorclustError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(MirrorclustError):
    """Input has the wrong shape, or two inputs have incompatible shapes."""


class DomainError(MirrorclustError):
    """A value lies outside the domain an operation is defined on."""


class NumericError(MirrorclustError):
    """A numerical routine failed to converge."""


class DegenerateSpectrumError(MirrorclustError):
    """CMDS cannot embed to the requested dimension: the r-th eigenvalue of
    the doubly centered matrix is not positive.

    Carries the full spectrum so the caller can inspect it and lower r.
    """

    def __init__(self, message: str, spectrum: np.ndarray):
        super().__init__(message)
        self.spectrum = np.asarray(spectrum)


class IngestionError(MirrorclustError):
    """A data file could not be parsed; the message names file and line."""
