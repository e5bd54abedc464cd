from .generator import *
from .oracle import *
