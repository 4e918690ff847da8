"""Exception hierarchy shared by every layer of the engine."""


class CCDError(Exception):
    """Base class for all engine errors."""


class CapExceeded(CCDError):
    """Exact enumeration would need more than the configured number of events."""


class InvalidProbability(CCDError, ValueError):
    pass


class ForeignEvent(CCDError, ValueError):
    """An event set was evaluated against a space it was not drawn from."""


class UnknownEvent(CCDError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown event"


class SharedLeaf(CCDError, ValueError):
    """A basic event appears twice inside one fault tree (closed form unsound)."""


class SharedLeafAcrossBoxes(CCDError, ValueError):
    """Two decision boxes of one path share a basic event (closed form unsound)."""


class NotDisjoint(CCDError, ValueError):
    pass


class DuplicatePath(CCDError, ValueError):
    pass


class EmptyPath(CCDError, ValueError):
    pass


class NegativeRate(CCDError, ValueError):
    pass


class NegativeTime(CCDError, ValueError):
    pass


class NonPositiveRate(CCDError, ValueError):
    pass


class MissingLoadProb(CCDError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "missing load probability"


class ZeroCustomers(CCDError, ValueError):
    pass
