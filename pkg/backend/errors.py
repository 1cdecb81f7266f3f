# backend/errors.py


class AquaGuardError(Exception):
    """Base class for every error raised by the backend."""


class PoleError(AquaGuardError):
    """Gamma function evaluated at a non-positive integer."""


class NoContourError(AquaGuardError):
    """The left and right pole families of an H-function kernel cannot be separated."""


class ConvergenceError(AquaGuardError):
    """
    Quadrature did not reach its tolerance.

    axis: "s" (inner / first variable), "t" (outer / second variable) or None
    term: index of the closed-form term being evaluated, or None
    """

    def __init__(self, msg, axis=None, term=None):
        super().__init__(msg)
        self.axis = axis
        self.term = term

    def with_term(self, term):
        return ConvergenceError(self.args[0], axis=self.axis, term=term)

    def __str__(self):
        base = super().__str__()
        tags = []
        if self.axis is not None:
            tags.append(f"axis={self.axis}")
        if self.term is not None:
            tags.append(f"term={self.term}")
        return f"{base} ({', '.join(tags)})" if tags else base


class DomainError(AquaGuardError):
    """Argument outside the domain of a function or of a special-case formula."""


class InfeasibleError(AquaGuardError):
    """Optimizer target cannot be met inside the search range."""


class ConfigError(AquaGuardError):
    """Scenario / preset parse error; field and line locate the problem when known."""

    def __init__(self, msg, field=None, line=None):
        super().__init__(msg)
        self.field = field
        self.line = line

    def __str__(self):
        base = super().__str__()
        where = []
        if self.field:
            where.append(f"field '{self.field}'")
        if self.line:
            where.append(f"line {self.line}")
        return f"{base} [{', '.join(where)}]" if where else base
