"""Ball Banach function space norms, operators and verification checks."""

from ._bbfs import *  # noqa: F401,F403
