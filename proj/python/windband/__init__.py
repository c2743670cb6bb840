"""Wind power generation uncertainty sets."""

from ._core import *  # noqa: F401,F403
from ._core import WindbandError, __version__  # noqa: F401
