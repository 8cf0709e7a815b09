"""Exception hierarchy shared by every module of the package."""


class CpgeoError(Exception):
    """Base class for all structured errors raised by cpgeo."""


class DimensionMismatch(CpgeoError, ValueError):
    pass


class DegreeError(CpgeoError, ValueError):
    pass


class DependentBasis(CpgeoError, ValueError):
    pass


class SingularSystem(CpgeoError, ArithmeticError):
    pass


class InconsistentEquations(CpgeoError, ValueError):
    """Structure equations whose differential does not square to zero."""

    def __init__(self, message, form_index=None, d_squared=None):
        super().__init__(message)
        self.form_index = form_index
        self.d_squared = d_squared


class AxiomViolation(CpgeoError):
    """A metric contact pair axiom failed; carries the gate name and a witness."""

    def __init__(self, axiom, message, witness=None):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


class NotInvolutive(CpgeoError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotPhiInvariant(CpgeoError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WrongCase(CpgeoError, ValueError):
    """An operation was applied to a subspace of the wrong classification case."""


class ParseError(CpgeoError, ValueError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
