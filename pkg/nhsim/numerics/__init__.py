from .newton import *
