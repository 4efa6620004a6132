"""Exception types shared across the engine."""

from __future__ import annotations


class PytsError(Exception):
    """Base class for all engine errors."""


class ArityMismatch(PytsError):
    """Generic instantiated with the wrong number of arguments."""


class NotGeneric(PytsError):
    """Instantiation target has no universal (forall) head."""


class InvalidArity(PytsError):
    """Family index outside its legal arity range."""


class UnknownName(PytsError):
    """An ET-name failed to resolve in the type environment."""


class NameClash(PytsError):
    """An ET-name is already defined in the environment."""


class NotAnInterface(PytsError):
    """Conformance target has no record signature."""


class MissingMember(PytsError):
    """A witness lacks a binding required by the target signature."""

    def __init__(self, member: str):
        super().__init__(f"missing binding for member {member!r}")
        self.member = member


class BoundViolated(PytsError):
    """A witness representation type is not a subtype of the target bound."""


class UnknownBase(PytsError):
    """A base class name does not resolve in the class registry."""


class CyclicHierarchy(PytsError):
    """The inheritance graph contains a cycle."""


class InconsistentHierarchy(PytsError):
    """C3 merge failed: no linearization exists."""


class UnknownAnnotation(PytsError):
    """An annotation name resolves neither to a builtin nor a known class."""


class MisusedTypeVar(PytsError):
    """A type variable was used outside the scope that declares it."""
