"""Exception types raised by chanup."""


class ChannelError(ValueError):
    """Base class for invalid channel data."""


class NegativeEntry(ChannelError):
    def __init__(self, x, y, value):
        self.x, self.y, self.value = x, y, value
        super().__init__(f"negative entry W({y}|{x}) = {value}")


class RowSumViolation(ChannelError):
    def __init__(self, x, actual):
        self.x, self.actual = x, actual
        super().__init__(f"row {x} sums to {actual}, not 1")


class EmptyChannel(ChannelError):
    pass


class DimensionMismatch(ChannelError):
    pass


class ChannelSyntaxError(ChannelError):
    def __init__(self, line, msg):
        self.line = line
        super().__init__(f"line {line}: {msg}")


class SingularSystem(ArithmeticError):
    """The two endpoint columns are proportional on the solved coordinates."""


class NonnegativityViolated(ArithmeticError):
    """A split produced a negative scale or leftover entry.

    ``which`` is ``"s1"``, ``"s3"`` or ``("leftover", x)``.
    """

    def __init__(self, which, value):
        self.which, self.value = which, value
        super().__init__(f"{which} = {value} < 0")


class NotProportional(ValueError):
    pass


class MassTooSmall(ValueError):
    pass


class InstanceTooLarge(ValueError):
    pass


class InvalidSpec(ValueError):
    pass
