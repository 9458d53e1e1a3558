"""Stationary graph signal processing.

Spectral filters, PSD estimation, and Wiener-type recovery on weighted
graphs. The heavy lifting lives in the compiled extension; this package
re-exports its surface unchanged.
"""

from gsig._core import *  # noqa: F401,F403
from gsig._core import __doc__ as _core_doc  # noqa: F401
from gsig._core import __version__  # noqa: F401
