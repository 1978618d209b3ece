"""Decorators for the curi package."""

from __future__ import annotations

from functools import wraps
from typing import TYPE_CHECKING, Any, Callable, TypeVar

from curi.exceptions import DigestMismatchError, MissingArtifactError
from curi.utils import sha256_file

if TYPE_CHECKING:
    from curi.pipeline import Pipeline

F = TypeVar("F", bound=Callable[..., Any])


def requires_artifacts(*names: str) -> Callable[[F], F]:
    """A decorator that requires upstream artifacts to exist and match their manifest digests.

    Names are paths relative to the output directory and may use `{kind}` and `{mode}`, which are
    filled from the keyword arguments of the call.
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(self: Pipeline, *args: Any, **kwargs: Any) -> F:  # noqa: ANN401
            recorded = self.manifest.artifacts
            for name in names:
                relative = name.format(**kwargs)
                path = self.out / relative
                if not path.exists() or relative not in recorded:
                    raise MissingArtifactError(message=f"Missing artifact {relative}; run the stage that builds it.")
                if sha256_file(path) != recorded[relative]:
                    raise DigestMismatchError(message=f"Artifact {relative} does not match its manifest digest.")
            return func(self, *args, **kwargs)

        return wrapper  # type: ignore  # noqa: PGH003

    return decorator
