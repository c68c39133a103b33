"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CertificationError(Exception):
    """Base class: a certificate could not be produced.

    ``certificate`` optionally carries the failed record (with its margin) so
    that a pipeline can report where and by how much an argument broke.
    """

    def __init__(self, message: str = "", certificate=None):
        super().__init__(message)
        self.certificate = certificate


class EndpointRoot(CertificationError):
    pass


class NotSquarefree(CertificationError):
    pass


class PoleAt(CertificationError):
    pass


class NoRationalWitness(CertificationError):
    """The polynomial is nonnegative on the ray but touches zero at an irrational point."""


class WidthTooCoarse(CertificationError):
    pass


class ReconstructionMismatch(CertificationError):
    pass


class OutsideCone(CertificationError):
    pass


class InvalidBound(CertificationError):
    pass


class BudgetTooLarge(CertificationError):
    pass


class InsufficientBudgetGap(CertificationError):
    pass


class NonUnimodular(CertificationError):
    pass


class SignLemmaFailure(CertificationError):
    pass


class IncompleteExclusion(CertificationError):
    pass


class ConsistencyError(CertificationError):
    pass


class ConfigError(ValueError):
    """Malformed command-line or run configuration (exit code 2)."""


class UnknownRule(ConfigError):
    pass
