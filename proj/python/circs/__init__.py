from ._circs import *  # noqa: F401,F403
from ._circs import __doc__  # noqa: F401
