"""Exception hierarchy.

Two families matter to the command line: validation problems (bad input,
exit code 2) and guard violations (input is well formed but outside what a
routine can handle, exit code 3).
"""


class TropazError(Exception):
    exit_code = 1


class ValidationError(TropazError):
    exit_code = 2


class GuardViolation(TropazError):
    exit_code = 3


class ConfigError(ValidationError):
    pass


class MalformedRational(ValidationError):
    pass


class MissingEdgeWeight(ValidationError):
    pass


class UnexpectedEdgeWeight(ValidationError):
    pass


class NonPositivePeriod(ValidationError):
    pass


class NotAPerfectMatching(ValidationError):
    pass


class SlopeSumMismatch(ValidationError):
    pass


class OutsideDomain(ValidationError):
    pass


class EdgeNotInMaximizerGraph(ValidationError):
    pass


class SizeGuardExceeded(GuardViolation):
    pass


class NotSmooth(GuardViolation):
    pass


class NotMonomial(GuardViolation):
    pass


class NearZeroOnTorus(GuardViolation):
    pass


class EmptyComponentInterior(GuardViolation):
    pass


class UnboundedComponent(GuardViolation):
    pass


class SingularKasteleyn(GuardViolation):
    pass


class SingularKasteleynOnContour(GuardViolation):
    pass


# Internal consistency failures; these indicate a bug, never bad input.
class ConsistencyError(TropazError):
    exit_code = 1


class UnreachedSlope(ConsistencyError):
    pass


class HeightInconsistency(ConsistencyError):
    pass


class SingularSystem(ConsistencyError):
    pass


class InconsistentThirdEdge(ConsistencyError):
    pass


class ImageOutsideDomain(ConsistencyError):
    pass


class InconsistentHeight(ConsistencyError):
    pass
