"""Exception hierarchy shared by all modules."""


class CapBoundsError(Exception):
    """Base class for library errors."""


class InvalidArgument(CapBoundsError, ValueError):
    """A parameter lies outside its documented range."""


class DomainError(CapBoundsError, ValueError):
    """Input is well-typed but outside the mathematical domain (e.g. unphysical CM)."""


class SingularStateError(DomainError):
    """A matrix function hits a pole, e.g. the Gibbs matrix of a pure mode."""


class QuantumLimitedSingularity(SingularStateError):
    """Finite-resource construction is singular at a quantum-limited point.

    Use :func:`capbounds.tele_sim.pure_loss_resource` for the pure-loss channel.
    """


class NumericError(CapBoundsError, ArithmeticError):
    """A numerical routine failed or produced an inconsistent result."""


class CutoffTooSmall(NumericError):
    """Fock truncation leaves more tail mass than tolerated."""


class InternalConsistencyError(CapBoundsError, RuntimeError):
    """A postcondition the library guarantees was violated."""
