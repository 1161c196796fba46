"""
This module contains the errors that can be raised while loading, building or checking lattices and posets.
"""

from __future__ import annotations

import functools
from typing import Any, Type


class LatconError(Exception):
    """
    Base exception for all latcon errors.

    Attributes:
        message: The error message.
        details: Extra information about the failure (optional).
    """

    __exit_code__: int | None = None

    def __init__(self, message: str, details: Any | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def exit_code(self) -> int:
        """The process exit code the CLI uses for this error (resolved from the error family)."""
        for cls in type(self).__mro__:
            code = cls.__dict__.get("__exit_code__")
            if code is not None:
                return code
        return 2

    @staticmethod
    @functools.cache
    def _all_exceptions() -> tuple[Type["LatconError"], ...]:
        """Get all concrete exceptions (grandchildren of the base)."""
        return tuple(
            ss for s in LatconError.__subclasses__() for ss in s.__subclasses__()
        )

    @staticmethod
    def by_name(name: str) -> Type["LatconError"]:
        """Get the exception class by its name (falls back to the base)."""
        return next(
            (e for e in LatconError._all_exceptions() if e.__name__ == name),
            LatconError,
        )

    def __str__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r}, details={self.details!r})"

    def __repr__(self) -> str:
        return self.__str__()


# ====================================================================================================


class InputError(LatconError):
    """Base exception for malformed or unsuitable input."""

    __exit_code__ = 2


class PosetFormatError(InputError):
    """A poset/lattice file could not be parsed."""


class UnknownElementError(InputError):
    """An element id is not part of the poset or lattice."""


class CyclicOrderError(InputError):
    """The declared covers contain a cycle (or a self loop)."""


class RedundantCoverError(InputError):
    """A declared cover is implied by other covers (raised only in strict mode)."""


class EmptyPosetError(InputError):
    """The operation needs a nonempty poset."""


class NotALatticeError(InputError):
    """
    The poset is not a lattice.

    Attributes:
        pair: The offending pair of elements.
        reason: One of ``no-lub``, ``no-glb`` or ``not-unique``.
    """

    def __init__(self, pair: tuple[str, str], reason: str, bound: str | None = None) -> None:
        bound = bound or ("glb" if "glb" in reason else "lub")
        super().__init__(
            f"{pair[0]!r} and {pair[1]!r} have no unique {bound}",
            details={"pair": list(pair), "reason": reason, "bound": bound},
        )
        self.pair = pair
        self.reason = reason


class NotGradedError(InputError):
    """The lattice has no rank function."""


class NotRectangularError(InputError):
    """The embedding is not a rectangular lattice."""


class NotSRError(InputError):
    """The embedding is not a slim rectangular (SR) lattice."""


class NotSPSError(InputError):
    """The lattice is not slim, planar and semimodular."""


class NotDistributiveError(InputError):
    """The lattice is not distributive."""


class NotACoveringSquareError(InputError):
    """The four elements do not form a covering square."""


class InvalidDeltaError(InputError):
    """An edge of a diagram has a coordinate delta that no natural diagram can produce."""


class TrivialLatticeError(InputError):
    """The lattice has a single element and therefore no edges."""


class UnknownPatternError(InputError):
    """No forbidden configuration is registered under this name."""


class ConfigError(InputError):
    """The configuration file or an option value is invalid."""


# ====================================================================================================


class LimitError(LatconError):
    """Base exception for exceeded size guards."""

    __exit_code__ = 2


class SizeGuardExceeded(LimitError):
    """A brute-force oracle was called on an instance that is too large."""


class CapExceeded(LimitError):
    """An enumeration was requested beyond the configured cap."""


# ====================================================================================================


class VerificationError(LatconError):
    """Base exception for results that failed their own post-verification."""

    __exit_code__ = 1


class VerificationFailed(VerificationError):
    """A construction did not pass the congruence oracle."""


class EmbeddingNotFound(VerificationError):
    """No planar embedding was found for a lattice that passed the planarity test."""
