"""Error and warning types shared by all modules."""


class PolyweightError(ValueError):
    """Raised by numerical routines; ``code`` is a short machine-readable tag."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class AliasingWarning(UserWarning):
    """Sampled spectrum still carries energy near the Nyquist band."""

    code = "aliasing"


class ConvergenceWarning(UserWarning):
    """Quadrature refinement stopped before reaching its tolerance."""

    code = "no-convergence"
