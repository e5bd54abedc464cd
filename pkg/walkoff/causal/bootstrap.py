"""
bootstrap.py
Nonparametric percentile bootstrap of the IPW odds ratio
"""
import logging
import warnings
from dataclasses import dataclass
from functools import partial
from typing import Tuple

import numpy as np

from ..exceptions import PipelineError, WalkoffError
from ..utils import distributed_map
from .effects import ipw_effect
from .propensity import estimate_propensity, ipw_weights, trim

logger = logging.getLogger(__name__)

__all__ = ['BootstrapResult', 'bootstrap_ci', 'ipw_log_or', 'MinReplicates']

MinReplicates = 100


@dataclass(frozen=True)
class BootstrapResult:
    interval: Tuple[float, float]
    level: float
    log_ors: np.ndarray
    n_replicates: int
    n_failed: int
    valid: bool

    @property
    def failed_fraction(self):
        return self.n_failed / self.n_replicates

    @property
    def se(self):
        ok = self.log_ors[np.isfinite(self.log_ors)]
        return float(np.std(ok, ddof=1)) if len(ok) > 1 else 0.0


def ipw_log_or(sample, config):
    """ Full pipeline on one resample: propensity refit, trimming, weighting, outcome model """
    scored, _ = estimate_propensity(sample, config)
    kept, n_trimmed = trim(scored, config)
    return ipw_effect(ipw_weights(kept, config['weight_scheme']), config, n_trimmed).log_or


def _replicate(index, cohort, config, seed, statistic):
    rng = np.random.default_rng([seed, index])
    rows = rng.integers(0, len(cohort), size=len(cohort))
    sample = cohort.iloc[rows].reset_index(drop=True)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        try:
            return float(statistic(sample, config))
        except WalkoffError as exc:
            logger.debug('Bootstrap replicate %d failed: %s', index, exc)
            return np.nan


def bootstrap_ci(cohort, config, statistic=None):
    """ Percentile interval of exp(statistic) over bootstrap resamples of the cohort

    Replicate b draws from numpy.random.default_rng([seed, b]), so the interval does not
    depend on execution order or on config['n_workers'].

    Parameters
    ----------
    cohort: pandas.DataFrame
        Cohort in the cohort-CSV layout
    config: ConfigFile
        Pipeline configuration (bootstrap_replicates, seed, ci_level, n_workers,
        max_failed_fraction, ...)
    statistic: callable(sample, config) -> log odds ratio, optional
        Defaults to ipw_log_or. Replicates raising a WalkoffError count as failed.

    Returns
    -------
    BootstrapResult
    """
    n_replicates = config['bootstrap_replicates']
    if n_replicates < MinReplicates:
        raise PipelineError('Bootstrap needs at least {} replicates, got {}'.format(MinReplicates, n_replicates))
    statistic = statistic or ipw_log_or
    cohort = cohort.reset_index(drop=True)

    task = partial(_replicate, cohort=cohort, config=config, seed=config['seed'], statistic=statistic)
    log_ors = np.array(distributed_map(task, range(n_replicates), config['n_workers']), dtype=float)

    ok = log_ors[np.isfinite(log_ors)]
    n_failed = n_replicates - len(ok)
    if len(ok) == 0:
        raise PipelineError('All {} bootstrap replicates failed'.format(n_replicates))

    level = config['ci_level']
    lo, hi = np.percentile(ok, [50 * (1 - level), 50 * (1 + level)])
    valid = n_failed <= config['max_failed_fraction'] * n_replicates
    if not valid:
        message = '{} of {} bootstrap replicates failed; the interval may be invalid'.format(n_failed, n_replicates)
        logger.warning(message)
        warnings.warn(message)
    elif n_failed:
        logger.info('%d of %d bootstrap replicates failed', n_failed, n_replicates)

    return BootstrapResult(interval=(float(np.exp(lo)), float(np.exp(hi))),
                           level=level,
                           log_ors=log_ors,
                           n_replicates=n_replicates,
                           n_failed=n_failed,
                           valid=valid)
