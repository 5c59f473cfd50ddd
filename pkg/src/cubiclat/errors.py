"""Exception types raised across the package."""


class CubicLatError(Exception):
    pass


class NotTotallyReal(CubicLatError):
    pass


class NotTotallyPositive(CubicLatError):
    pass


class NotPrime(CubicLatError):
    pass


class Singular(CubicLatError):
    pass


class NotSublattice(CubicLatError):
    pass


class NoSolution(CubicLatError):
    """The lattice described by the given roots is not an ideal."""


class PreconditionFailed(CubicLatError):
    pass


class SearchExhausted(CubicLatError):
    pass


class InvalidUnit(CubicLatError):
    pass


class NonConvergence(CubicLatError):
    pass


class SingularM(CubicLatError):
    pass


class Empty(CubicLatError):
    pass


class TooFewSamples(CubicLatError):
    pass
