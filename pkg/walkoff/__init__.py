"""
walkoff
Sacrifice bunting in tied extra innings: event-file replay, IPW effect estimation,
synthetic oracles and a base-out Markov simulator
"""
import logging

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())

from . import (base, causal, cohort, config, constants, drivers, exceptions, formatter, glm, retrosheet, simulator,
               stats, synth, utils)
