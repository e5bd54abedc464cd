"""
drivers/
Implements CLI commands
"""
__all__ = [
    'parse_driver', 'cohort_driver', 'collect_event_files', 'estimate_driver', 'simulate_driver', 'score_table',
    'synth_validate_driver', 'check_invariants'
]

from .estimate import *
from .events import *
from .simulate import *
from .synth import *
