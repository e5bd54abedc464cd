"""
propensity.py
Propensity scores, trimming and inverse probability weights as scikit-learn transformers
over the cohort DataFrame
"""
import logging
from abc import abstractmethod

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.pipeline import Pipeline

from ..base import ABCRegistry
from ..constants import Covariates, TrimHigh, TrimLow
from ..exceptions import ConfigError, ConvergenceError, PipelineError
from ..glm import design_matrix, fit_logistic, predict_prob
from ..utils import ConfigFile

logger = logging.getLogger(__name__)

__all__ = [
    'PipelineConfig', 'PropensityScorer', 'PropensityTrimmer', 'InverseProbabilityWeighter', 'WeightScheme',
    'propensity_pipeline', 'estimate_propensity', 'trim', 'ipw_weights'
]


def PipelineConfig(content=None, **overrides):
    """ Validated pipeline configuration

    Parameters
    ----------
    content: str or Mapping, optional
        key=value / .json file or mapping overriding the defaults
    overrides:
        Individual values taking precedence over content
    """
    if isinstance(content, ConfigFile):
        config = ConfigFile(dict(content), kind='pipeline')
    else:
        config = ConfigFile(content, kind='pipeline')
    for key, value in overrides.items():
        config[key] = value
    if not 0 <= config['trim_lo'] < config['trim_hi'] <= 1:
        raise ConfigError('Need 0 <= trim_lo < trim_hi <= 1, got [{}, {}]'.format(
            config['trim_lo'], config['trim_hi']), key='trim_lo')
    if not 0 < config['ci_level'] < 1:
        raise ConfigError('ci_level must lie in (0, 1)', key='ci_level')
    if config['ci_method'] not in ('bootstrap', 'wald'):
        raise ConfigError('ci_method must be bootstrap or wald', key='ci_method')
    if config['effect_scale'] not in ('conditional', 'marginal'):
        raise ConfigError('effect_scale must be conditional or marginal', key='effect_scale')
    WeightSchemeRegistry.lookup(config['weight_scheme'])
    for key in ('propensity_covariates', 'outcome_covariates'):
        unknown = set(config[key]) - set(Covariates)
        if unknown:
            raise ConfigError('Unknown covariates {} in {}'.format(sorted(unknown), key), key=key)
    return config


class PropensityScorer(BaseEstimator, TransformerMixin):
    """ Fits A ~ covariates by logistic regression and adds a 'propensity' column """
    def __init__(self, covariates=Covariates, opts=None):
        self.covariates = covariates
        self.opts = opts

    def fit(self, X, y=None):
        counts = X['A'].value_counts()
        if counts.get(1, 0) < 2 or counts.get(0, 0) < 2:
            raise PipelineError('Propensity model needs at least 2 records per arm, got {} bunt / {} swing'.format(
                counts.get(1, 0), counts.get(0, 0)))
        self.model_ = fit_logistic(design_matrix(X, self.covariates), X['A'].to_numpy(), opts=self.opts)
        if not self.model_.converged:
            raise ConvergenceError('Propensity model did not converge', diagnostics=self.model_.diagnostics)
        return self

    def transform(self, X, y=None):
        X = X.copy()
        X['propensity'] = predict_prob(self.model_, X[list(self.covariates)])
        return X


class PropensityTrimmer(BaseEstimator, TransformerMixin):
    """ Keeps records with trim_lo <= propensity <= trim_hi, order preserved """
    def __init__(self, trim_lo=TrimLow, trim_hi=TrimHigh):
        self.trim_lo = trim_lo
        self.trim_hi = trim_hi

    def fit(self, X, y=None):
        return self

    def transform(self, X, y=None):
        keep = (X['propensity'] >= self.trim_lo) & (X['propensity'] <= self.trim_hi)
        self.n_trimmed_ = int((~keep).sum())
        if not keep.any():
            raise PipelineError('All observations trimmed')
        if self.n_trimmed_:
            logger.info('Trimmed %d of %d records outside [%g, %g]', self.n_trimmed_, len(X), self.trim_lo,
                        self.trim_hi)
        return X[keep.to_numpy()].copy()


class WeightSchemeRegistry(ABCRegistry):
    REGISTRY = {}
    _config_key = 'weight_scheme'


def WeightScheme(name):
    return WeightSchemeRegistry.lookup(name)()


class BaseWeightScheme(metaclass=WeightSchemeRegistry):
    @abstractmethod
    def weights(self, propensity, A):
        pass


class StandardWeights(BaseWeightScheme):
    """ 1/e for the treated, 1/(1-e) for controls """

    _registry_name = 'standard'

    def weights(self, propensity, A):
        return np.where(A == 1, 1 / propensity, 1 / (1 - propensity))


class TreatedInverseWeights(BaseWeightScheme):
    """ 1/e for every record (sensitivity analysis) """

    _registry_name = 'treated_inverse'

    def weights(self, propensity, A):
        return 1 / propensity


class InverseProbabilityWeighter(BaseEstimator, TransformerMixin):
    def __init__(self, scheme='standard'):
        self.scheme = scheme

    def fit(self, X, y=None):
        return self

    def transform(self, X, y=None):
        propensity = X['propensity'].to_numpy(dtype=float)
        if not ((propensity > 0) & (propensity < 1)).all():
            raise PipelineError('Propensity scores must lie strictly inside (0, 1) before weighting')
        X = X.copy()
        X['weight'] = WeightScheme(self.scheme).weights(propensity, X['A'].to_numpy())
        return X


def propensity_pipeline(config):
    return Pipeline([('propensity', PropensityScorer(covariates=tuple(config['propensity_covariates']))),
                     ('trim', PropensityTrimmer(config['trim_lo'], config['trim_hi'])),
                     ('weight', InverseProbabilityWeighter(config['weight_scheme']))])


def estimate_propensity(cohort, config):
    """ Returns (cohort with 'propensity', fitted LogisticModel) """
    scorer = PropensityScorer(covariates=tuple(config['propensity_covariates'])).fit(cohort)
    return scorer.transform(cohort), scorer.model_


def trim(cohort, config):
    """ Returns (kept cohort, n_trimmed) """
    trimmer = PropensityTrimmer(config['trim_lo'], config['trim_hi'])
    kept = trimmer.fit_transform(cohort)
    return kept, trimmer.n_trimmed_


def ipw_weights(cohort, scheme='standard'):
    return InverseProbabilityWeighter(scheme).fit_transform(cohort)
