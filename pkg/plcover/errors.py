"""Exception types raised by plcover.

Every error derives from PlcoverError. Errors caused by malformed input or by a
violated precondition also derive from ValueError so callers that only know the
standard library can still catch them.
"""

from typing import Any, Optional


class PlcoverError(Exception):
    """Base class for all plcover errors."""


# complex_core / formats

class DuplicateLabelInFace(PlcoverError, ValueError):
    def __init__(self, face):
        super().__init__(f"face {tuple(face)!r} repeats a vertex label")
        self.face = tuple(face)


class EmptyComplex(PlcoverError, ValueError):
    def __init__(self, message: str = "complex has no vertices"):
        super().__init__(message)


class NotConnected(PlcoverError, ValueError):
    def __init__(self, components: int):
        super().__init__(f"complex is not connected ({components} components)")
        self.components = components


class InvalidSubcomplex(PlcoverError, ValueError):
    """A mask is not downward closed or does not match its complex."""


class ComplexFormatError(PlcoverError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class LabelCollision(PlcoverError, ValueError):
    def __init__(self, labels):
        labels = sorted(set(labels))
        super().__init__(f"labels already in use: {labels}")
        self.labels = labels


# collapse

class TooLarge(PlcoverError, ValueError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"input has {size} triangles, brute force is limited to {limit}")
        self.size = size
        self.limit = limit


class CollapseExpectationFailed(PlcoverError):
    """A collapse that the construction guarantees did not go through."""


class BudgetExhausted(PlcoverError):
    def __init__(self, budget: int):
        super().__init__(f"search budget of {budget} exhausted")
        self.budget = budget


# subdivision

class InvalidTriangle(PlcoverError, ValueError):
    def __init__(self, triangle: Any):
        super().__init__(f"no such triangle: {triangle!r}")
        self.triangle = triangle


class MapMismatch(PlcoverError, ValueError):
    def __init__(self, message: str = "second map does not start where the first one ends"):
        super().__init__(message)


# homology

class DimensionMismatch(PlcoverError, ValueError):
    pass


class NotACycle(PlcoverError, ValueError):
    def __init__(self):
        super().__init__("chain has nonzero boundary")


class SpheresNotDisjoint(PlcoverError, ValueError):
    def __init__(self, first: int, second: int):
        super().__init__(f"spheres {first} and {second} share a simplex")
        self.pair = (first, second)


# shelling

class NotPure(PlcoverError, ValueError):
    def __init__(self, message: str = "complex is not pure 2-dimensional"):
        super().__init__(message)


class NotAPermutation(PlcoverError, ValueError):
    def __init__(self, message: str = "order is not a permutation of the triangles"):
        super().__init__(message)


# enrichment / plgcat

class PreconditionViolation(PlcoverError, ValueError):
    def __init__(self, clause: str, detail: str = ""):
        message = f"precondition '{clause}' violated"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.clause = clause
        self.detail = detail


class NotACover(PlcoverError, ValueError):
    def __init__(self, message: str = "pieces do not cover the complex"):
        super().__init__(message)


class NotEnriched(PlcoverError, ValueError):
    def __init__(self, message: str = "complex was not built by enrich"):
        super().__init__(message)


# reduction

class DimacsSyntaxError(PlcoverError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"DIMACS line {line}: {message}")
        self.line = line


class NotThreeCNF(PlcoverError, ValueError):
    def __init__(self, clause_index: int, size: int):
        super().__init__(f"clause {clause_index} has {size} literals, expected 3")
        self.clause_index = clause_index
        self.size = size


class TooManyVariables(PlcoverError, ValueError):
    def __init__(self, num_vars: int, limit: int):
        super().__init__(f"{num_vars} variables exceed the brute-force limit of {limit}")
        self.num_vars = num_vars
        self.limit = limit


class ContractViolation(PlcoverError):
    def __init__(self, report: Optional[Any] = None):
        failed = []
        if report is not None:
            failed = [entry["name"] for entry in report.failed()]
        super().__init__(f"gadget contract violated: {', '.join(failed) or 'unknown check'}")
        self.report = report


class WrongCount(PlcoverError, ValueError):
    def __init__(self, got: int, expected: int):
        super().__init__(f"{got} triangles removed, expected one per sphere ({expected})")
        self.got = got
        self.expected = expected


class TriangleNotInSphere(PlcoverError, ValueError):
    def __init__(self, triangle: int, reason: str = "lies in no sphere"):
        super().__init__(f"triangle {triangle} {reason}")
        self.triangle = triangle
