"""Ordinal Turing machines, codes of hereditarily finite sets and reductions between choice principles."""
from .errors import *  # noqa: F401,F403
from .ordinal import *  # noqa: F401,F403
from .setcode import *  # noqa: F401,F403
from .tape import BLANK, Tape  # noqa: F401
from .vm import *  # noqa: F401,F403
from .asm import *  # noqa: F401,F403
from .problems import *  # noqa: F401,F403
from .reductions import *  # noqa: F401,F403

__version__ = "0.1.0"
