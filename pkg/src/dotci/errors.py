class NumericalError(RuntimeError):
    """A quadrature or eigensolve did not reach its tolerance."""


class NoCrossingError(RuntimeError):
    """The binding energy does not change sign over the requested bracket."""

    def __init__(self, message, f_lo=None, f_hi=None, binding_lo=None, binding_hi=None):
        super().__init__(message)
        self.f_lo = f_lo
        self.f_hi = f_hi
        self.binding_lo = binding_lo
        self.binding_hi = binding_hi


class ConfigError(ValueError):
    def __init__(self, message, key=None, line=None):
        where = ""
        if key is not None:
            where += f" [key {key!r}"
            where += f", line {line}]" if line is not None else "]"
        super().__init__(message + where)
        self.key = key
        self.line = line
