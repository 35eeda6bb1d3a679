"""Exception types."""


class SpectraError(Exception):
    """Base class for all package errors."""


class NotDiscAutomorphism(SpectraError, ValueError):
    pass


class MissingAngleSpec(SpectraError, ValueError):
    pass


class DegenerateMap(SpectraError, ValueError):
    pass


class AmbiguousClass(SpectraError, ValueError):
    pass


class NotElliptic(SpectraError, ValueError):
    pass


class WeightSyntaxError(SpectraError, ValueError):
    """Weight expression does not match the grammar."""

    def __init__(self, position, expected, text=""):
        self.position = position
        self.expected = expected
        self.text = text
        got = repr(text[position]) if 0 <= position < len(text) else "end of input"
        super().__init__(f"at position {position}: expected {expected}, got {got}")


class ExponentTooLarge(SpectraError, ValueError):
    pass


class ZeroWeight(SpectraError, ValueError):
    pass


class ZeroPolynomial(SpectraError, ValueError):
    pass


class BudgetExhausted(SpectraError):
    """Subdivision ran out of cells; carries the best bounds found."""

    def __init__(self, lower, upper, witness, cells):
        self.lower = lower
        self.upper = upper
        self.witness = witness
        self.cells = cells
        super().__init__(f"budget of {cells} cells exhausted with bounds [{lower:.3g}, {upper:.3g}]")


class UnsupportedCase(SpectraError):
    pass


class Inconclusive(SpectraError):
    pass
