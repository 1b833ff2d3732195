from .bundle import *
from .rolling_disk import *
from .particle import *
from .registry import *
from .scenarios import *
