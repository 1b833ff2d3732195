"""
Discrete nonholonomic mechanics with impacts.
"""

from .errors import *
from .tolerances import *
from .numerics import *
from .mechanics import *
from .stepper import *
from .impact import *
from .integrator import *
from .oracle import *
from .catalog import *
