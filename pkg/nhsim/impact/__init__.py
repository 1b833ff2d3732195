from .records import *
from .resolver import *
from .continuous import *
