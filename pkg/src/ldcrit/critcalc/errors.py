"""Errors raised while checking proof scripts."""

from __future__ import annotations


class CalcError(Exception):
    """Base class; ``where`` is ``script:line`` when known."""

    def __init__(self, msg: str, where: str | None = None):
        self.where = where
        self.msg = msg
        super().__init__(f"{where}: {msg}" if where else msg)


class ScriptSyntaxError(CalcError):
    pass


class RuleMismatch(CalcError):
    """A step does not follow from its premises by the named rule."""


class UnknownPremise(CalcError):
    pass


class CycleDetected(CalcError):
    """The proven order facts would contain a strict cycle."""


class GoalUnproved(CalcError):
    pass


class BridgeViolation(CalcError):
    """A proven fact disagrees with the finite tables."""
