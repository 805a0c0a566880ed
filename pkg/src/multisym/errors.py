"""Exception hierarchy shared by the toolkit."""


class MultisymError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(MultisymError):
    pass


class VarianceMismatchError(MultisymError):
    pass


class DegreeError(MultisymError):
    pass


class ChartMismatchError(MultisymError):
    pass


class DegenerateFrameError(MultisymError):
    pass


class NotClosedError(MultisymError):
    """A family of vector fields does not close under the Lie bracket."""


class NotBasicError(MultisymError):
    """A form disagrees across fiber-shifted sections: not basic."""


class NotProjectableError(MultisymError):
    pass


class IncompatibleReductionsError(MultisymError):
    pass


class DomainExitError(MultisymError):
    """Integration left the chart domain; carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class UnknownExampleError(MultisymError):
    pass
