from .system import *
from .constraints import *
