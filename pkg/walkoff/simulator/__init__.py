"""
simulator/
Base-out Markov chain for the first run of a half-inning and extra-inning game dynamics
"""
from .game import *
from .markov import *
