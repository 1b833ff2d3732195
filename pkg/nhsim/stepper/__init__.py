from .lagrangian import *
from .flags import *
from .trajectory import *
from .dla import *
