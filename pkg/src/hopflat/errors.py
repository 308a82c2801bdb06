"""Structured exceptions raised across the library."""


class HopflatError(Exception):
    """Base class for all library errors."""


class ParentMismatchError(HopflatError):
    """Elements of different algebras were combined."""


class InvalidInputError(HopflatError):
    """Input tensors contain NaN/Inf or violate a structural precondition."""


class NotSemisimpleError(HopflatError):
    """A Haar integral / Wedderburn decomposition could not be computed."""


class InvalidStarError(HopflatError):
    """The Haar inner product is not positive definite."""


class InvalidGroupError(HopflatError):
    """A group multiplication table violates the group axioms."""


class NotHopfSubalgebraError(HopflatError):
    """A generated span is not closed under the Hopf operations."""


class NotSeparableError(HopflatError):
    """No (unique) symmetric separability idempotent exists."""


class NotAugmentedError(HopflatError):
    """An augmentation was required but not provided."""


class DegenerateError(HopflatError):
    """A rank computation produced an inconsistent quotient."""


class LatticeValidationError(HopflatError):
    """A cellulation or ribbon failed validation."""


class UnsupportedConfigurationError(HopflatError):
    """A boundary/wall local picture outside the paper's displayed cases."""


class TooLargeError(HopflatError):
    """Dense materialization above the configured dimension cap."""


class DegenerateModelError(HopflatError):
    """Model data produced a zero ground state."""


class ModelInconsistencyError(HopflatError):
    """A trace or projector check came out inconsistent."""


class IncompleteNetworkError(HopflatError):
    """A Hopf tensor network is missing edge or face labels."""


class BudgetExceededError(HopflatError):
    """A computation exceeded its configured size budget."""
