"""
balance.py
Covariate balance before and after weighting, and propensity histogram data
"""
from dataclasses import dataclass
from typing import Dict

import numpy as np
import pandas as pd

from ..constants import Covariates

__all__ = ['BalanceReport', 'standardized_difference', 'effective_sample_size', 'balance_diagnostics',
           'propensity_histogram']


@dataclass
class BalanceReport:
    smd_unweighted: Dict[str, float]
    smd_weighted: Dict[str, float]
    comparable: Dict[str, bool]
    n: Dict[int, int]
    ess: Dict[int, float]

    def frame(self):
        return pd.DataFrame({
            'covariate': list(self.smd_unweighted),
            'smd_unweighted': list(self.smd_unweighted.values()),
            'smd_weighted': [self.smd_weighted[c] for c in self.smd_unweighted],
            'comparable': [int(self.comparable[c]) for c in self.smd_unweighted]
        })

    def ess_frame(self):
        return pd.DataFrame({'A': [1, 0], 'n': [self.n[1], self.n[0]], 'ess': [self.ess[1], self.ess[0]]})


def _weighted_moments(x, w):
    mean = np.sum(w * x) / np.sum(w)
    return mean, np.sum(w * (x - mean)**2) / np.sum(w)


def standardized_difference(x1, x0, w1=None, w0=None):
    """ (mean1 - mean0) / sqrt((var1 + var0) / 2)

    Unweighted variances use ddof=1. A zero pooled sd gives 0 when the means agree and
    NaN (incomparable) otherwise.
    """
    if w1 is None:
        m1, v1 = np.mean(x1), (np.var(x1, ddof=1) if len(x1) > 1 else 0.0)
        m0, v0 = np.mean(x0), (np.var(x0, ddof=1) if len(x0) > 1 else 0.0)
    else:
        m1, v1 = _weighted_moments(x1, w1)
        m0, v0 = _weighted_moments(x0, w0)
    pooled = np.sqrt((v1 + v0) / 2)
    if pooled == 0 or not np.isfinite(pooled):
        return 0.0 if np.isclose(m1, m0) else np.nan
    return float((m1 - m0) / pooled)


def effective_sample_size(w):
    w = np.asarray(w, dtype=float)
    return float(np.sum(w)**2 / np.sum(w**2))


def balance_diagnostics(cohort, covariates=Covariates):
    """ Standardized mean differences per covariate, unweighted and weighted, and the
    effective sample size per arm. Needs a 'weight' column.
    """
    treated, control = cohort[cohort['A'] == 1], cohort[cohort['A'] == 0]
    w1, w0 = treated['weight'].to_numpy(dtype=float), control['weight'].to_numpy(dtype=float)
    unweighted, weighted, comparable = {}, {}, {}
    for c in covariates:
        x1, x0 = treated[c].to_numpy(dtype=float), control[c].to_numpy(dtype=float)
        unweighted[c] = standardized_difference(x1, x0)
        weighted[c] = standardized_difference(x1, x0, w1, w0)
        comparable[c] = bool(np.isfinite(unweighted[c]) and np.isfinite(weighted[c]))
    return BalanceReport(smd_unweighted=unweighted,
                         smd_weighted=weighted,
                         comparable=comparable,
                         n={1: len(treated), 0: len(control)},
                         ess={1: effective_sample_size(w1), 0: effective_sample_size(w0)})


def propensity_histogram(cohort, bins=20):
    """ Counts of propensity scores per arm in equal bins on [0, 1] """
    edges = np.linspace(0, 1, bins + 1)
    bunt, _ = np.histogram(cohort.loc[cohort['A'] == 1, 'propensity'], bins=edges)
    swing, _ = np.histogram(cohort.loc[cohort['A'] == 0, 'propensity'], bins=edges)
    return pd.DataFrame({'bin_lo': edges[:-1], 'bin_hi': edges[1:], 'count_bunt': bunt, 'count_swing': swing})
