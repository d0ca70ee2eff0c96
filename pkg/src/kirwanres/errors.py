"""Exception hierarchy shared by all modules."""


class KirwanError(Exception):
    """Base class for every error raised by this package."""


class VariableMismatch(KirwanError, ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class ParseError(KirwanError, ValueError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class SpaceError(KirwanError, ValueError):
    """Fixed-point data violates a structural invariant."""


class NonRegularValue(SpaceError):
    """Some fixed point has moment exactly zero."""


class TiedMomentValues(SpaceError):
    def __init__(self, labels, value):
        self.labels = tuple(labels)
        self.value = value
        super().__init__(
            f"fixed points {', '.join(self.labels)} share moment value {value}; "
            "choose a different circle (see `kirwanres toric ... --bound`)"
        )


class PoleOnCircleAxis(KirwanError, ValueError):
    """A denominator factor has zero X-coefficient, so Res_X^+ is undefined."""


class NotInSpan(KirwanError, ValueError):
    """A class is not a polynomial combination of the canonical basis."""


class SearchExhausted(KirwanError):
    """No generic circle was found within the search bound."""


class BrokenTransferChain(KirwanError, KeyError):
    """A class has no image at some reduction stage."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SchemaError(KirwanError, ValueError):
    """Input file does not follow the documented JSON schema."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
