"""Transmon + multimode SAW resonator simulator and parameter-estimation tools.

Rates and frequencies are linear MHz, times are microseconds.
"""

from ._cqad import *  # noqa: F401,F403
from ._cqad import __version__, InvalidArgument, NumericalError  # noqa: F401
