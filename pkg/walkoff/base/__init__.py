from .base import ABCRegistry
from .state import BaseOutState, live_states
