"""
oracle.py
Brute-force marginal odds ratio of a synthetic spec and the estimator-recovery experiment
"""
import logging
from dataclasses import dataclass
from functools import partial

import numpy as np
import pandas as pd
from scipy.special import expit

from ..causal import PipelineConfig, crude_or, estimate_propensity, ipw_effect, ipw_weights, trim
from ..exceptions import WalkoffError
from ..utils import distributed_map
from .generator import generate_frame, sample_covariates, to_cohort_frame

logger = logging.getLogger(__name__)

__all__ = ['OracleResult', 'true_marginal_or', 'recovery_config', 'recovery_replicate', 'recovery_experiment']

DefaultPopulation = 10**6


@dataclass(frozen=True)
class OracleResult:
    odds_ratio: float
    log_or: float
    mean_y1: float
    mean_y0: float
    se_mean_y1: float
    se_mean_y0: float
    se_log_or: float
    n_population: int


def true_marginal_or(spec, n_population=DefaultPopulation, seed=None):
    """ g-computation by brute force over n_population sampled covariate rows

    Returns the odds ratio of the mean potential-outcome probabilities with Monte Carlo
    standard errors of both means and of the log odds ratio.
    """
    x = sample_covariates(spec, n_population, seed)
    linear = spec.beta_intercept + x @ spec.beta
    p1, p0 = expit(linear + spec.beta_treatment), expit(linear)
    m1, m0 = p1.mean(), p0.mean()
    log_or = np.log(m1 / (1 - m1)) - np.log(m0 / (1 - m0))
    influence = p1 / (m1 * (1 - m1)) - p0 / (m0 * (1 - m0))
    sqrt_n = np.sqrt(n_population)
    return OracleResult(odds_ratio=float(np.exp(log_or)),
                        log_or=float(log_or),
                        mean_y1=float(m1),
                        mean_y0=float(m0),
                        se_mean_y1=float(p1.std(ddof=1) / sqrt_n),
                        se_mean_y0=float(p0.std(ddof=1) / sqrt_n),
                        se_log_or=float(influence.std(ddof=1) / sqrt_n),
                        n_population=n_population)


def recovery_config(config=None):
    """ Pipeline settings of the recovery experiment: no trimming, marginal scale, Wald only """
    return PipelineConfig(config, trim_lo=0.0, trim_hi=1.0, effect_scale='marginal', ci_method='wald')


def recovery_replicate(rep, spec, n, seed, config):
    """ Crude, marginal IPW and conditional IPW log odds ratios on one synthetic cohort """
    cohort = to_cohort_frame(generate_frame(spec, n, seed=[seed, rep]))
    row = {'rep': rep, 'n': n, 'treated': int(cohort['A'].sum())}
    try:
        row['crude_log_or'] = crude_or(cohort).log_or
        scored, _ = estimate_propensity(cohort, config)
        kept, n_trimmed = trim(scored, config)
        ipw = ipw_effect(ipw_weights(kept, config['weight_scheme']), config, n_trimmed)
        row['ipw_log_or'] = ipw.log_or
        row['ipw_conditional_log_or'] = ipw.model.coefficient('A')
    except WalkoffError as exc:
        logger.warning('Recovery repetition %d failed: %s', rep, exc)
        row.update({'crude_log_or': row.get('crude_log_or', np.nan), 'ipw_log_or': np.nan,
                    'ipw_conditional_log_or': np.nan})
    return row


def recovery_experiment(spec, n, reps, seed, config=None, truth=None, n_workers=1):
    """ Repeat generate -> crude / IPW estimation reps times and compare with the oracle

    Repetition r uses the cohort generated from seed [seed, r].

    Returns
    -------
    pandas.DataFrame, one row per repetition with crude_log_or, ipw_log_or,
    ipw_conditional_log_or, true_log_or, the absolute errors against the marginal
    truth and ipw_closer
    """
    config = recovery_config(config)
    truth = truth or true_marginal_or(spec, seed=seed)
    task = partial(recovery_replicate, spec=spec, n=n, seed=seed, config=config)
    frame = pd.DataFrame(distributed_map(task, range(reps), n_workers))
    frame['true_log_or'] = truth.log_or
    frame['true_conditional_log_or'] = spec.beta_treatment
    frame['crude_error'] = (frame['crude_log_or'] - truth.log_or).abs()
    frame['ipw_error'] = (frame['ipw_log_or'] - truth.log_or).abs()
    frame['ipw_closer'] = (frame['ipw_error'] < frame['crude_error']).astype(int)
    return frame
