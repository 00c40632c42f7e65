"""
Error types raised by rackgeom services.

Each class carries the process exit code the CLI reports for it:
2 parse, 3 validation, 4 resource cap, 5 internal invariant violation.
"""


class RackGeomError(Exception):
    exit_code = 1


class ParseError(RackGeomError):
    exit_code = 2

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, column {col}: {message}")


class ValidationError(RackGeomError):
    exit_code = 3


class MalformedGrid(ValidationError):
    pass


class NotABijection(ValidationError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"axiom A0 fails: row {row} is not a permutation")


class SelfDistributivityFails(ValidationError):
    def __init__(self, x: int, y: int, z: int):
        self.triple = (x, y, z)
        super().__init__(
            f"axiom A1 fails: {x} > ({y} > {z}) != ({x} > {y}) > ({x} > {z})"
        )


class NotAQuandle(ValidationError):
    pass


class NotCentralizing(ValidationError):
    def __init__(self, s, h):
        self.s = s
        self.h = h
        super().__init__(f"subgroup element {h} does not commute with {s}")


class NotAnAutomorphism(ValidationError):
    pass


class NotGenerating(ValidationError):
    pass


class NotNormallyGenerating(ValidationError):
    pass


class DifferentComponents(ValidationError):
    pass


class NotACocycle(ValidationError):
    pass


class DegenerateValueNonzero(ValidationError):
    pass


class NoSolution(ValidationError):
    pass


class InvalidDegree(ValidationError):
    pass


class InvalidArgument(ValidationError):
    pass


class ResourceCapError(RackGeomError):
    exit_code = 4


class GroupTooLarge(ResourceCapError):
    pass


class DegreeTooLarge(ResourceCapError):
    pass


class CapExceeded(ResourceCapError):
    pass


class InternalInvariantViolation(RackGeomError):
    exit_code = 5
