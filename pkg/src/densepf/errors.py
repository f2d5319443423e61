"""Exception hierarchy for densepf."""


class DensePFError(Exception):
    """Base class for all library errors."""


class BadDelta(DensePFError, ValueError):
    def __init__(self, delta, allowed="(0, 1]"):
        super().__init__(f"delta={delta!r} is outside {allowed}")
        self.delta = delta


class InvariantError(DensePFError, ValueError):
    pass


class EntryOutOfBounds(InvariantError):
    """An entry violates delta <= a_ij <= 1. Indices are 1-based."""

    def __init__(self, i, j, value, delta):
        super().__init__(
            f"entry ({i},{j}) = {value!r} is outside [{delta!r}, 1]"
        )
        self.i = i
        self.j = j
        self.value = value


class TooLarge(DensePFError, ValueError):
    def __init__(self, n, cap, what):
        super().__init__(f"{what}: n={n} exceeds the enumeration cap {cap}")
        self.n = n
        self.cap = cap


class SameCycle(DensePFError, ValueError):
    pass


class NotConverged(DensePFError, RuntimeError):
    def __init__(self, residual, iterations):
        super().__init__(
            f"scaling did not converge: residual {residual:.3e} after "
            f"{iterations} iterations"
        )
        self.residual = residual
        self.iterations = iterations


class WrongVertexAtPosition(DensePFError, ValueError):
    pass


class NotAnEdge(DensePFError, ValueError):
    pass


class OnPath(DensePFError, ValueError):
    pass


class HypothesisViolated(DensePFError, ValueError):
    pass


class NotApplicable(DensePFError, ValueError):
    pass


class ParseError(DensePFError, ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


__all__ = [name for name, obj in list(globals().items())
           if isinstance(obj, type) and issubclass(obj, DensePFError)]
