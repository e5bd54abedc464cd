"""
retrosheet/
Event-file parsing, game replay and pitch profiles
"""
from .events import *
from .pitches import *
from .replay import *
