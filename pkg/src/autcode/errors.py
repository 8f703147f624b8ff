"""Exception hierarchy shared by all modules."""


class AutcodeError(Exception):
    pass


class BudgetError(AutcodeError):
    """A step, stage or block budget ran out before an answer was found."""

    def __init__(self, msg, needed=None):
        super().__init__(msg)
        self.needed = needed


class ParseError(AutcodeError):
    def __init__(self, msg, pos=None):
        if pos is not None:
            msg = f"{msg} at position {pos}"
        super().__init__(msg)
        self.pos = pos


class CycleTypeError(AutcodeError):
    pass


class ConstructionError(AutcodeError):
    pass


class WindowError(AutcodeError):
    pass


class CertificateError(AutcodeError):
    pass
