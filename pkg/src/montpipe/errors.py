class MontError(Exception):
    """Base class for all errors raised by montpipe."""


class ParameterError(MontError, ValueError):
    """Invalid modulus, radix, stage count, operand or table parameter."""


class InvariantError(MontError, AssertionError):
    """An arithmetic invariant failed at run time.

    Raised for a nonzero low window before a shift, a width overflow in the
    redundant datapath, a carry precondition violation or a final-reduction
    bound violation. ``iteration`` is set when the failure is tied to one.
    """

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"iteration {iteration}: {message}"
        super().__init__(message)
        self.iteration = iteration
