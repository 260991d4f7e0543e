"""Edge uplink allocation and resolution control with heterogeneous-action RL."""

from ._edgerl import *  # noqa: F401,F403
from ._edgerl import IDLE, __version__  # noqa: F401
