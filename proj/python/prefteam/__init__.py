from ._prefteam import *  # noqa: F401,F403
from ._prefteam import __doc__  # noqa: F401
