"""Exception hierarchy.

Every error raised on purpose derives from :class:`WindextError` so the CLI
can map it to an exit code instead of a traceback.
"""


class WindextError(Exception):
    """Base class for all library errors."""


class TruncationMismatch(WindextError):
    pass


class DegreeTooHigh(WindextError):
    pass


class ZeroOnBoundary(WindextError):
    """The function (or composite) comes within ``delta`` of zero on the circle."""


class PhaseUnresolved(WindextError):
    pass


class NonIntegerTotal(WindextError):
    pass


class NotAnalytic(WindextError):
    pass


class RankUnstable(WindextError):
    pass


class NoRationalModel(WindextError):
    pass


class DegenerateFit(WindextError):
    pass


class RootFindingFailed(WindextError):
    pass


class InsufficientSmoothness(WindextError):
    pass


class NodeOffCircle(WindextError):
    pass


class NodeValueZero(WindextError):
    pass


class TruncationOverflow(WindextError):
    pass


class DeflationFailed(WindextError):
    """A declared zero of ``f`` is not actually a zero of the declared order."""


class UnknownCase(WindextError):
    pass


class BadParams(WindextError):
    pass


class BadSampleFile(WindextError):
    pass
