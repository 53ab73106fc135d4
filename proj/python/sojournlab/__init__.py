"""Monte-Carlo laboratory for sojourn times, fragility indices, expected
shortfall and excursion laws of processes above high thresholds."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
