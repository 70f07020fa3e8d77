"""Exception hierarchy.

Every precondition failure carries the hypothesis it violates so the CLI can
name it; :class:`OracleMismatch` is kept apart because it signals a fault in
the construction itself rather than bad input.
"""


class CarveError(Exception):
    """Base class for all errors raised by weylcarve."""

    hypothesis = "precondition"

    def __init__(self, message="", hypothesis=None):
        super().__init__(message)
        if hypothesis is not None:
            self.hypothesis = hypothesis


class PreconditionError(CarveError):
    pass


class RamifiedPrime(PreconditionError):
    hypothesis = "requires B unramified at p"


class PTooSmall(PreconditionError):
    hypothesis = "requires p > 2g"


class NotEffective(PreconditionError):
    hypothesis = "requires a_g >= 0 and c = sum(a_i) = s >= 1"


class NotCoprime(PreconditionError):
    hypothesis = "requires coprime polynomials"


class SizeLimit(PreconditionError):
    hypothesis = "exterior module exceeds the size cap"


class WrongCase(PreconditionError):
    hypothesis = "operation not defined for this case"


class WrongDegree(PreconditionError):
    hypothesis = "requires the pure tensor subspace"


class InvalidGenerator(PreconditionError):
    hypothesis = "generator must preserve the symplectic form up to similitude"


class InvalidWeight(PreconditionError):
    hypothesis = "weight must be dominant (and satisfy the unitary parity rule)"


class NotQuasiIdempotent(PreconditionError):
    hypothesis = "requires c^2 = n c"


class NotTorusStable(PreconditionError):
    hypothesis = "subspace must be stable under the torus"


class NotStable(PreconditionError):
    hypothesis = "subspace must be stable"


class DegenerateEigenvalues(PreconditionError):
    hypothesis = "eigenvalues must be pairwise distinct"


class OracleMismatch(CarveError):
    """The construction disagrees with an independent oracle."""

    hypothesis = "oracle mismatch"

    def __init__(self, message="", report=None):
        super().__init__(message)
        self.report = report
