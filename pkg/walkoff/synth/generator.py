"""
generator.py
Synthetic cohorts with known treatment-assignment and outcome mechanisms
"""
import logging
from dataclasses import asdict, dataclass, fields, replace

import numpy as np
import pandas as pd
from scipy.special import expit
from scipy.stats import truncnorm

from .. import config as global_config
from ..cohort import COHORT_COLUMNS, ResultCategory
from ..exceptions import ConfigError
from ..stats import CovariateTriple
from ..utils import ConfigFile, default_config_synth, write_key_value

logger = logging.getLogger(__name__)

__all__ = [
    'SynthSpec', 'SynthRecord', 'confounded_default_spec', 'unconfounded', 'sample_covariates', 'generate_frame',
    'generate', 'to_cohort_frame'
]

SYNTH_COLUMNS = ['ops', 'sac_rate', 'era', 'true_propensity', 'A', 'y1', 'y0', 'Y']


@dataclass(frozen=True)
class SynthSpec:
    """ Covariate distributions and logit-scale coefficients of a synthetic cohort

    ops ~ normal(ops_mean, ops_sd) truncated at 0, sac_rate is 0 with probability
    sac_zero_prob and exponential with mean sac_mean otherwise, era ~ normal(era_mean,
    era_sd) truncated at 0. Treatment: logit P(A=1) = alpha_intercept + alpha' x.
    Outcome: logit P(Y=1) = beta_intercept + beta_treatment A + beta' x.
    """
    ops_mean: float = default_config_synth['ops_mean']
    ops_sd: float = default_config_synth['ops_sd']
    sac_zero_prob: float = default_config_synth['sac_zero_prob']
    sac_mean: float = default_config_synth['sac_mean']
    era_mean: float = default_config_synth['era_mean']
    era_sd: float = default_config_synth['era_sd']
    alpha_intercept: float = default_config_synth['alpha_intercept']
    alpha_ops: float = default_config_synth['alpha_ops']
    alpha_sac_rate: float = default_config_synth['alpha_sac_rate']
    alpha_era: float = default_config_synth['alpha_era']
    beta_intercept: float = default_config_synth['beta_intercept']
    beta_treatment: float = default_config_synth['beta_treatment']
    beta_ops: float = default_config_synth['beta_ops']
    beta_sac_rate: float = default_config_synth['beta_sac_rate']
    beta_era: float = default_config_synth['beta_era']
    seed: int = default_config_synth['seed']

    def __post_init__(self):
        for name in ('ops_sd', 'era_sd', 'sac_mean'):
            if not getattr(self, name) > 0:
                raise ConfigError('{} must be positive, got {}'.format(name, getattr(self, name)), key=name)
        if not 0 <= self.sac_zero_prob <= 1:
            raise ConfigError('sac_zero_prob must be a probability, got {}'.format(self.sac_zero_prob),
                              key='sac_zero_prob')
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name != 'seed' and not np.isfinite(value):
                raise ConfigError('{} must be finite'.format(f.name), key=f.name)

    @property
    def alpha(self):
        return np.array([self.alpha_ops, self.alpha_sac_rate, self.alpha_era])

    @property
    def beta(self):
        return np.array([self.beta_ops, self.beta_sac_rate, self.beta_era])

    @classmethod
    def from_config(cls, content=None):
        """ From a key=value file, a mapping or a ConfigFile of kind 'synth' """
        if not isinstance(content, ConfigFile):
            content = ConfigFile(content, kind='synth')
        return cls(**dict(content))

    def to_config(self):
        return ConfigFile(asdict(self), kind='synth')

    def save(self, path):
        write_key_value(asdict(self), path)


@dataclass(frozen=True)
class SynthRecord:
    covariates: CovariateTriple
    true_propensity: float
    A: int
    y1: int
    y0: int
    Y: int


def confounded_default_spec():
    """ Bunting skill raises and hitting quality lowers the bunt probability; hitting quality
    raises the win probability
    """
    return SynthSpec()


def unconfounded(spec):
    """ spec with the treatment model's covariate slopes zeroed """
    return replace(spec, alpha_ops=0.0, alpha_sac_rate=0.0, alpha_era=0.0)


def _seed_sequence(seed):
    return list(seed) if isinstance(seed, (tuple, list)) else [seed]


def _truncated_normal(mean, sd, size, rng):
    return truncnorm.rvs((0 - mean) / sd, np.inf, loc=mean, scale=sd, size=size, random_state=rng)


def _covariate_block(spec, size, rng):
    ops = _truncated_normal(spec.ops_mean, spec.ops_sd, size, rng)
    sac = np.where(rng.random(size) < spec.sac_zero_prob, 0.0, rng.exponential(spec.sac_mean, size))
    era = _truncated_normal(spec.era_mean, spec.era_sd, size, rng)
    return np.column_stack([ops, sac, era])


def _blocks(n, seed, block_size):
    """ (block size, generator) pairs; block k draws from default_rng([*seed, k]) """
    block_size = block_size or global_config.SynthBlockSize
    for k, start in enumerate(range(0, n, block_size)):
        yield min(block_size, n - start), np.random.default_rng(_seed_sequence(seed) + [k])


def sample_covariates(spec, n, seed=None, block_size=None):
    """ n x 3 array of (ops, sac_rate, era) """
    seed = spec.seed if seed is None else seed
    return np.concatenate([_covariate_block(spec, size, rng) for size, rng in _blocks(n, seed, block_size)])


def generate_frame(spec, n, seed=None, block_size=None):
    """ DataFrame with columns ops, sac_rate, era, true_propensity, A, y1, y0, Y

    y1 and y0 are drawn independently given the covariates; Y = A y1 + (1 - A) y0.
    Deterministic given (spec, n, seed); seed may be an int or a sequence of ints.
    """
    if n < 1:
        raise ConfigError('n must be at least 1, got {}'.format(n), key='n')
    seed = spec.seed if seed is None else seed
    parts = []
    for size, rng in _blocks(n, seed, block_size):
        x = _covariate_block(spec, size, rng)
        propensity = expit(spec.alpha_intercept + x @ spec.alpha)
        A = (rng.random(size) < propensity).astype(int)
        linear = spec.beta_intercept + x @ spec.beta
        y1 = (rng.random(size) < expit(linear + spec.beta_treatment)).astype(int)
        y0 = (rng.random(size) < expit(linear)).astype(int)
        parts.append(
            pd.DataFrame({
                'ops': x[:, 0],
                'sac_rate': x[:, 1],
                'era': x[:, 2],
                'true_propensity': propensity,
                'A': A,
                'y1': y1,
                'y0': y0,
                'Y': A * y1 + (1 - A) * y0
            }))
    return pd.concat(parts, ignore_index=True)[SYNTH_COLUMNS]


def generate(spec, n, seed=None):
    """ List of SynthRecord, see generate_frame """
    frame = generate_frame(spec, n, seed)
    return [
        SynthRecord(CovariateTriple(r.ops, r.sac_rate, r.era), r.true_propensity, int(r.A), int(r.y1), int(r.y0),
                    int(r.Y)) for r in frame.itertuples(index=False)
    ]


def to_cohort_frame(frame, season=2022):
    """ Project a synthetic frame (or list of SynthRecord) onto the cohort-CSV layout """
    if not isinstance(frame, pd.DataFrame):
        frame = pd.DataFrame([{
            'ops': r.covariates.ops,
            'sac_rate': r.covariates.sac_rate,
            'era': r.covariates.era,
            'A': r.A,
            'Y': r.Y
        } for r in frame])
    n = len(frame)
    index = np.arange(n)
    cohort = pd.DataFrame({
        'game_id': ['SYN{:09d}'.format(i) for i in index],
        'season': season,
        'inning': 10,
        'batter_id': ['synb{:07d}'.format(i) for i in index],
        'pitcher_id': ['synp{:07d}'.format(i) for i in index],
        'A': frame['A'].to_numpy(dtype=int),
        'Y': frame['Y'].to_numpy(dtype=int),
        'ops': frame['ops'].to_numpy(dtype=float),
        'sac_rate': frame['sac_rate'].to_numpy(dtype=float),
        'era': frame['era'].to_numpy(dtype=float),
        'result_category': ResultCategory.OTHER.value
    })
    return cohort[COHORT_COLUMNS]
