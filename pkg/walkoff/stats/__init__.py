from .season import *
