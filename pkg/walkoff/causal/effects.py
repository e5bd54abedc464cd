"""
effects.py
Crude and inverse-probability-weighted odds ratios for winning, bunt vs. swing away
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from ..exceptions import ConvergenceError, PipelineError, ZeroCellError
from ..glm import design_matrix, fit_logistic, wald_ci

logger = logging.getLogger(__name__)

__all__ = ['EffectEstimate', 'two_by_two', 'crude_or', 'ipw_effect', 'marginal_log_or']


@dataclass(frozen=True)
class EffectEstimate:
    method: str
    odds_ratio: float
    log_or: float
    se_log_or: Optional[float]
    ci: Tuple[float, float]
    ci_method: str
    n_used: int
    n_trimmed: int = 0
    level: float = 0.95
    scale: str = 'conditional'
    model: object = field(default=None, compare=False, repr=False)

    def row(self):
        return {
            'method': self.method,
            'odds_ratio': self.odds_ratio,
            'ci_lo': self.ci[0],
            'ci_hi': self.ci[1],
            'ci_method': self.ci_method,
            'n_used': self.n_used,
            'n_trimmed': self.n_trimmed
        }


def two_by_two(cohort):
    """ Counts (wins A=1, losses A=1, wins A=0, losses A=0) """
    A, Y = cohort['A'].to_numpy(), cohort['Y'].to_numpy()
    return (int(np.sum((A == 1) & (Y == 1))), int(np.sum((A == 1) & (Y == 0))), int(np.sum((A == 0) & (Y == 1))),
            int(np.sum((A == 0) & (Y == 0))))


def crude_or(cohort, level=0.95):
    """ Unadjusted odds ratio of the A-by-Y table with a Woolf (log-scale Wald) interval """
    a, b, c, d = two_by_two(cohort)
    if a + b == 0 or c + d == 0:
        raise PipelineError('Crude odds ratio needs both arms, got {} bunt / {} swing records'.format(a + b, c + d))
    if min(a, b, c, d) == 0:
        raise ZeroCellError('2x2 table (wins/losses bunt {}/{}, swing {}/{}) has an empty cell; the odds ratio is '
                            'undefined. Use a bootstrap interval or an explicit continuity correction.'.format(
                                a, b, c, d))
    log_or = np.log(a * d / (b * c))
    se = np.sqrt(1 / a + 1 / b + 1 / c + 1 / d)
    z = norm.ppf(0.5 + level / 2)
    return EffectEstimate(method='crude',
                          odds_ratio=float(np.exp(log_or)),
                          log_or=float(log_or),
                          se_log_or=float(se),
                          ci=(float(np.exp(log_or - z * se)), float(np.exp(log_or + z * se))),
                          ci_method='wald',
                          n_used=a + b + c + d,
                          level=level,
                          scale='crude')


def marginal_log_or(model, X):
    """ Standardized (g-computation) log odds ratio over the rows of X, with its delta-method se

    Every row is predicted once with A=1 and once with A=0; the odds ratio of the two mean
    predictions is returned.
    """
    X1, X0 = X.copy(), X.copy()
    X1['A'], X0['A'] = 1.0, 0.0
    X1, X0 = X1[list(model.columns)].to_numpy(), X0[list(model.columns)].to_numpy()
    p1, p0 = expit(X1 @ model.coef), expit(X0 @ model.coef)
    m1, m0 = p1.mean(), p0.mean()
    log_or = np.log(m1 / (1 - m1)) - np.log(m0 / (1 - m0))
    grad = (p1 * (1 - p1)) @ X1 / len(X1) / (m1 * (1 - m1)) - (p0 * (1 - p0)) @ X0 / len(X0) / (m0 * (1 - m0))
    se = float(np.sqrt(max(grad @ model.cov @ grad, 0.0)))
    return float(log_or), se


def ipw_effect(cohort, config, n_trimmed=0):
    """ Weighted outcome model Y ~ A + outcome covariates with the IPW weights

    The conditional scale reports exp of A's coefficient; the marginal scale standardizes the
    weighted model's predictions over the records. The interval is a Wald interval; bootstrap
    intervals are attached by the pipeline.
    """
    if 'weight' not in cohort.columns:
        raise PipelineError('Cohort has no weights; run ipw_weights first')
    counts = cohort['A'].value_counts()
    if counts.get(1, 0) == 0 or counts.get(0, 0) == 0:
        raise PipelineError('IPW outcome model needs both arms')

    X = design_matrix(cohort, ['A'] + list(config['outcome_covariates']))
    model = fit_logistic(X, cohort['Y'].to_numpy(), cohort['weight'].to_numpy())
    if not model.converged:
        raise ConvergenceError('IPW outcome model did not converge', diagnostics=model.diagnostics)

    level = config['ci_level']
    if config['effect_scale'] == 'marginal':
        log_or, se = marginal_log_or(model, X)
        z = norm.ppf(0.5 + level / 2)
        ci = (float(np.exp(log_or - z * se)), float(np.exp(log_or + z * se)))
    else:
        log_or, se = model.coefficient('A'), model.se('A')
        ci = wald_ci(model, 'A', level)

    return EffectEstimate(method='ipw',
                          odds_ratio=float(np.exp(log_or)),
                          log_or=float(log_or),
                          se_log_or=se,
                          ci=ci,
                          ci_method='wald',
                          n_used=len(cohort),
                          n_trimmed=n_trimmed,
                          level=level,
                          scale=config['effect_scale'],
                          model=model)
