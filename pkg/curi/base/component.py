"""This module contains the base component class."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from curi.curi import Curi


class BaseComponent:
    """A class that represents a base component of the benchmark generator."""

    curi: Curi

    def __init__(self, curi: Curi) -> None:
        """Initialize the base component."""
        self.curi = curi

    def log(self, type_: str, message: str) -> None:
        """Log a message."""
        return getattr(self.curi.logger, type_)(message)

    @property
    def threads(self) -> int:
        """The number of worker threads this component may use."""
        return self.curi.threads
