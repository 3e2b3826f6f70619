"""Exceptions and warnings raised by scikit-dem."""


class ConfigurationError(ValueError):
    """Raised when a scenario, bank or preset is invalid.

    Configuration errors are always detected before any simulation
    starts.
    """


class SelectionError(ValueError):
    """Raised when a code cannot be served by an element selector.

    Parameters
    ----------
    message : str
        Description of the failure.

    cycle : int or None
        Cycle index at which the failure happened, when known.
    """
    def __init__(self, message, cycle=None):
        if cycle is not None:
            message = "cycle %d: %s" % (cycle, message)
        super(SelectionError, self).__init__(message)
        self.cycle = cycle


class SimulationError(RuntimeError):
    """Raised when a pipeline stage fails at run time.

    Parameters
    ----------
    message : str
        Description of the failure.

    stage : str
        One of "modulator", "selection", "dac" or "spectral".
    """
    def __init__(self, message, stage=None):
        if stage is not None:
            message = "[%s] %s" % (stage, message)
        super(SimulationError, self).__init__(message)
        self.stage = stage


class InstabilityError(SimulationError):
    """Raised when a modulator integrator exceeds its blow-up bound."""
    def __init__(self, message, cycle=None, state=None):
        super(InstabilityError, self).__init__(message, stage="modulator")
        self.cycle = cycle
        self.state = state


class QuantizerOverloadWarning(UserWarning):
    """Issued when the quantizer input leaves its no-overload range."""
