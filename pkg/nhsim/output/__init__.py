from .resultfile import *
