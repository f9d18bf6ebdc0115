from ._rgbdseg import *  # noqa: F401,F403
from ._rgbdseg import __doc__  # noqa: F401
