"""Exception hierarchy shared by all modules."""


class OrbitAtlasError(Exception):
    """Base class for all library errors."""


class ParseError(OrbitAtlasError):
    """Malformed ring spec, matrix literal, or quaternion literal."""


class InvalidParams(OrbitAtlasError):
    """Ring parameters outside the supported family (n < 1, r < 1, ...)."""


class NonOddPrime(InvalidParams):
    """p is even or composite; only odd prime characteristic is supported."""


class ReducibleModulus(InvalidParams):
    """Supplied modulus polynomial is not irreducible over GF(p)."""


class RingMismatch(OrbitAtlasError):
    """Operands belong to different rings."""


class NotAUnit(OrbitAtlasError):
    """Inversion of a non-unit ring element."""


class NotInRadical(OrbitAtlasError):
    """Argument required to lie in the Jacobson radical does not."""


class ZeroArgument(OrbitAtlasError):
    """Zero passed where a nonzero element is required."""


class NotAField(OrbitAtlasError):
    """Operation defined only over the residue-field case (n = 1)."""


class InvalidK(OrbitAtlasError):
    """Quotient exponent k outside 1..n."""


class NotInvertible(OrbitAtlasError):
    """Matrix determinant is not a unit."""


class NotUnipotent(OrbitAtlasError):
    """Matrix is not unipotent."""


class ScalarInput(OrbitAtlasError):
    """Scalar matrix passed to an operation requiring a non-scalar."""


class BudgetExceeded(OrbitAtlasError):
    """Enumeration state space exceeds the configured budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} states, budget is {budget} "
            f"(raise it with --budget)"
        )


class IsoMismatch(OrbitAtlasError):
    """Quaternion/matrix passed to an isomorphism built over another ring."""
