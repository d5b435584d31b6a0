"""Exception types shared across the package."""


class FracformError(Exception):
    """Base class for all errors raised by fracform."""


class ReducibleForm(FracformError, ValueError):
    """A Dirichlet form whose support graph is disconnected was given where an
    irreducible one is required."""


class NumericalFailure(FracformError, ArithmeticError):
    """A linear solve or elimination produced an unusable result."""


class InvalidTriple(FracformError, ValueError):
    """A fractal triple description violates one or more axioms.

    All violations are collected; ``violations`` is a list of
    ``(kind, message)`` pairs where ``kind`` is one of ``"AxiomA"``,
    ``"AxiomB"``, ``"AxiomC"``, ``"NotInjective"``, ``"CoverageGap"`` or
    ``"Malformed"``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [f"{kind}: {msg}" for kind, msg in self.violations]
        super().__init__("invalid fractal triple:\n  " + "\n  ".join(lines))

    @property
    def kinds(self):
        return {kind for kind, _ in self.violations}
