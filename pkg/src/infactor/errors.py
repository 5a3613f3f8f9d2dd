"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: InputError/ConfigError/Unsupported -> 2,
oracle errors -> 3, SearchExhausted -> 4.
"""

from __future__ import annotations


class InfactorError(Exception):
    """Base class for all library errors."""


class InputError(InfactorError, ValueError):
    """Malformed argument (bad edge, bad digit set, bad file record)."""


class ConfigError(InfactorError, ValueError):
    """Unknown or inconsistent graph/family/host descriptor."""


class Unsupported(InputError):
    """Parameter outside the range where a construction exists."""


class OracleError(InfactorError):
    """A graph oracle could not serve a request."""


class WitnessImpossible(OracleError):
    """The host has no vertex with the requested adjacency pattern."""


class OracleMissing(OracleError):
    """A pattern graph has no undominated-vertex oracle.

    This is the finite-dominating-set case: such a pattern cannot be grown
    onto an arbitrary host vertex without placing edges.
    """


class SearchExhausted(InfactorError):
    """The resolver scanned ``cap`` incidence entries without an eligible block."""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap
