"""Exception types raised by the package."""


class QubitDynamicsError(Exception):
    """Base class for all errors raised by :mod:`qubitmarkov`."""


class UnphysicalStateError(QubitDynamicsError, ValueError):
    """A Bloch vector or density matrix lies outside the state space."""


class NonHermitianHamiltonianError(QubitDynamicsError, ValueError):
    pass


class MissingCutoffError(QubitDynamicsError, ValueError):
    """The time-dependent Ohmic rate was requested without a cutoff frequency."""


class SingularMapError(QubitDynamicsError, ArithmeticError):
    """The map at the earlier time cannot be inverted, so no propagator exists."""


class StepSizeUnderflowError(QubitDynamicsError, ArithmeticError):
    pass


class QuadratureError(QubitDynamicsError, ArithmeticError):
    pass


class ConfigError(QubitDynamicsError, ValueError):
    """Invalid scenario configuration; the message names the offending key or line."""
