"""Exception types shared across the package."""


class InsufficientCutoffError(ValueError):
    """Raised when a truncated Fock space is too small for the requested operation.

    ``minimal_cutoff`` carries a sufficient cutoff when one can be computed.
    """

    def __init__(self, message, minimal_cutoff=None):
        super().__init__(message)
        self.minimal_cutoff = minimal_cutoff


class HeadroomError(InsufficientCutoffError):
    """Photons were pushed past a mode cutoff by more than the tail tolerance."""


class ImprobableOutcomeError(RuntimeError):
    """A heralding outcome has probability below the underflow tolerance."""

    def __init__(self, message, probability):
        super().__init__(message)
        self.probability = probability
