"""curi package."""

from curi.curi import Curi

__all__ = ("Curi",)
__version__ = "1.0.0"
