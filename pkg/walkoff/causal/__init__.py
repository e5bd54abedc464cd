"""
causal/
Propensity scores, inverse probability weighting and effect estimation
"""
from .balance import *
from .bootstrap import *
from .effects import *
from .pipeline import *
from .propensity import *
