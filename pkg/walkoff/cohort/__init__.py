"""
cohort/
Extraction, covariate join and description of the analysis cohort
"""
from .extract import *
from .io import *
from .summary import *
