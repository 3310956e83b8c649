"""Exception hierarchy.

Every exception carries the process exit code the CLI maps it to:
2 for configuration problems, 3 for numeric failures, 4 for a detected blowup.
"""


class CNSLabError(Exception):
    exit_code = 3


class ConfigError(CNSLabError):
    exit_code = 2


class ConstraintViolation(ConfigError, ValueError):
    """A model constant violates the physical admissibility constraint."""


class NoFeasibleP(CNSLabError, ValueError):
    pass


class DegenerateGamma(CNSLabError, ValueError):
    """Raised where a formula requires gamma > 1."""


class WrongGamma(CNSLabError, ValueError):
    pass


class EvaluationPastBlowup(CNSLabError, ValueError):
    pass


class OriginSingularity(CNSLabError, ValueError):
    pass


class NotLinearVelocity(CNSLabError, ValueError):
    pass


class NonIntegrable(CNSLabError, ArithmeticError):
    pass


class OutOfDomain(CNSLabError, ValueError):
    pass


class QuadratureFailure(CNSLabError, ArithmeticError):
    pass


class OriginDivergence(CNSLabError, ArithmeticError):
    pass


class GridMismatch(CNSLabError, ValueError):
    pass


class FitDegenerate(CNSLabError, ValueError):
    pass


class BlowupDetected(CNSLabError, RuntimeError):
    """The discrete solution left the representable range or dt underflowed.

    ``last_state`` holds the last healthy state, ``trajectory`` the partial
    run when raised from :func:`cnslab.solver.simulate`.
    """

    exit_code = 4

    def __init__(self, message, last_state=None, trajectory=None):
        super().__init__(message)
        self.last_state = last_state
        self.trajectory = trajectory
