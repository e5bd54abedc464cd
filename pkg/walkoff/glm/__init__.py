from .irls import *
