"""Exceptions for pyfreegroups."""


class FreeGroupException(Exception):
    """Base Exception class for pyfreegroups."""


class InvalidLetterException(FreeGroupException):
    """Raised when a letter is outside the rank or word text can't be parsed."""


class RankMismatchException(FreeGroupException):
    """Raised when an operation mixes elements of free groups of different rank."""


class IdentityWordException(FreeGroupException):
    """Raised when the identity is given where a nontrivial word is required."""


class NotCyclicallyReducedException(FreeGroupException):
    """Raised when a cyclically reduced word is required."""


class ConjugateSubgroupsException(FreeGroupException):
    """Raised when two cyclic subgroups that must be separated are conjugate."""


class BudgetExhaustedException(FreeGroupException):
    """Raised when a bounded search runs out of budget."""


class FiniteIndexException(FreeGroupException):
    """Raised when an operation needs a subgroup of infinite index."""


class InfiniteIndexException(FreeGroupException):
    """Raised when an operation needs a subgroup of finite index."""


class InvalidGraphException(FreeGroupException):
    """Raised when a subgroup graph violates the hypothesis of an operation."""


class PreconditionException(FreeGroupException):
    """Raised when an operation is called outside its precondition."""


class UnknownExperimentException(FreeGroupException):
    """Raise when an unknown experiment id is requested."""
