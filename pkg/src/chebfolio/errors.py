"""Exception hierarchy.

Input problems (bad files, bad ranges, too little data) derive from
``InputError``; failures that arise during the numerics derive from
``NumericalError``.  The CLI maps these to exit codes 2 and 3 and
``ConfigError`` to exit code 4.
"""


class ChebfolioError(Exception):
    """Base class for all package errors."""


class InputError(ChebfolioError, ValueError):
    pass


class NumericalError(ChebfolioError, ArithmeticError):
    pass


class ConfigError(ChebfolioError):
    pass


class DomainError(InputError):
    """Argument lies outside the interval on which a Chebyshev object is defined."""


class DegenerateDomainError(InputError):
    pass


class InsufficientSamplesError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class EmptyFileError(ParseError):
    pass


class DuplicateDateError(ParseError):
    pass


class NonPositivePriceError(ParseError):
    pass


class AlignmentError(InputError):
    pass


class InsufficientOverlapError(AlignmentError):
    pass


class ZeroVectorError(NumericalError):
    pass


class LengthMismatchError(NumericalError):
    pass


class ZeroVarianceError(NumericalError):
    pass


class DegenerateError(NumericalError):
    pass


class LabelMismatchError(NumericalError):
    pass
