"""
markov.py
Absorbing base-out Markov chain of a half-inning in which only the first run matters
"""
import logging
from dataclasses import asdict, dataclass, replace
from functools import lru_cache, partial
from typing import List

import numpy as np
from scipy.linalg import LinAlgError, solve
from scipy.optimize import least_squares

from .. import config as global_config
from ..base import BaseOutState, live_states
from ..exceptions import SimulatorError
from ..utils import ConfigFile, default_config_event_model, distributed_map

logger = logging.getLogger(__name__)

__all__ = [
    'EventModel', 'HalfInningResult', 'transition_matrix', 'score_prob', 'score_probs', 'simulate_half_inning',
    'monte_carlo_score_prob', 'bunt_policy_value', 'sac_failure_state', 'calibrate_event_model', 'SCORED',
    'THREE_OUTS', 'OUTCOMES', 'ON_BASE_OUTCOMES'
]

SCORED = 24
THREE_OUTS = 25
OUTCOMES = ('p_out', 'p_walk', 'p_single', 'p_double', 'p_triple', 'p_home_run', 'p_sac_success', 'p_sac_fail')
ON_BASE_OUTCOMES = ('p_walk', 'p_single', 'p_double', 'p_triple', 'p_home_run')
SAC_FAIL_MODES = ('batter_out', 'lead_runner_out')


@dataclass(frozen=True)
class EventModel:
    """ Plate-appearance outcome distribution plus the advancement rules that are not forced """
    p_out: float = default_config_event_model['p_out']
    p_walk: float = default_config_event_model['p_walk']
    p_single: float = default_config_event_model['p_single']
    p_double: float = default_config_event_model['p_double']
    p_triple: float = default_config_event_model['p_triple']
    p_home_run: float = default_config_event_model['p_home_run']
    p_sac_success: float = default_config_event_model['p_sac_success']
    p_sac_fail: float = default_config_event_model['p_sac_fail']
    single_scores_from_third: float = default_config_event_model['single_scores_from_third']
    single_scores_from_second: float = default_config_event_model['single_scores_from_second']
    double_scores_from_first: float = default_config_event_model['double_scores_from_first']
    out_scores_from_third: float = default_config_event_model['out_scores_from_third']
    sac_fail_mode: str = default_config_event_model['sac_fail_mode']

    def __post_init__(self):
        for name, value in asdict(self).items():
            if name == 'sac_fail_mode':
                continue
            if not 0 <= value <= 1:
                raise SimulatorError('{} = {} is not a probability'.format(name, value))
        total = sum(getattr(self, o) for o in OUTCOMES)
        if abs(total - 1) > 1e-12:
            raise SimulatorError('Outcome probabilities sum to {!r}, not 1'.format(total))
        if self.sac_fail_mode not in SAC_FAIL_MODES:
            raise SimulatorError('sac_fail_mode must be one of {}'.format(SAC_FAIL_MODES))

    @classmethod
    def from_config(cls, content=None):
        """ From a key=value / .json file, a mapping or a ConfigFile (kind 'event_model') """
        if not isinstance(content, ConfigFile):
            content = ConfigFile(content, kind='event_model')
        return cls(**dict(content))

    def to_config(self):
        return ConfigFile(asdict(self), kind='event_model')


@dataclass(frozen=True)
class HalfInningResult:
    scored: bool
    trajectory: List[BaseOutState]

    @property
    def plate_appearances(self):
        return len(self.trajectory) - 1


def _target(first, second, third, outs):
    if outs >= 3:
        return THREE_OUTS
    return BaseOutState(bool(first), bool(second), bool(third), outs).index


def _outcomes(state, m):
    """ (probability, target column) pairs of one plate appearance from a live state """
    f, s, t, outs = state.first, state.second, state.third, state.outs
    loaded = f and s and t

    # generic out: runners hold, a runner on third may score with fewer than two outs
    if outs < 2 and t:
        yield m.p_out * m.out_scores_from_third, SCORED
        yield m.p_out * (1 - m.out_scores_from_third), _target(f, s, t, outs + 1)
    else:
        yield m.p_out, _target(f, s, t, outs + 1)

    # walk: forced runners only
    if loaded:
        yield m.p_walk, SCORED
    else:
        yield m.p_walk, _target(True, s or f, t or (s and f), outs)

    # single
    if loaded:
        yield m.p_single, SCORED
    elif t:
        yield m.p_single * m.single_scores_from_third, SCORED
        yield m.p_single * (1 - m.single_scores_from_third), _target(True, s or f, True, outs)
    elif s:
        yield m.p_single * m.single_scores_from_second, SCORED
        yield m.p_single * (1 - m.single_scores_from_second), _target(True, f, True, outs)
    else:
        yield m.p_single, _target(True, f, False, outs)

    # double
    if s or t:
        yield m.p_double, SCORED
    elif f:
        yield m.p_double * m.double_scores_from_first, SCORED
        yield m.p_double * (1 - m.double_scores_from_first), _target(False, True, True, outs)
    else:
        yield m.p_double, _target(False, True, False, outs)

    yield m.p_triple, SCORED if (f or s or t) else _target(False, False, True, outs)
    yield m.p_home_run, SCORED

    # sacrifice: every runner moves up one base, batter out
    if outs == 2:
        yield m.p_sac_success, THREE_OUTS
    elif t:
        yield m.p_sac_success, SCORED
    else:
        yield m.p_sac_success, _target(False, f, s, outs + 1)

    if m.sac_fail_mode == 'lead_runner_out' and (f or s or t):
        # lead runner retired, trailing runners move up, batter to first
        if t:
            after = (True, f, s)
        elif s:
            after = (True, f, False)
        else:
            after = (True, False, False)
        yield m.p_sac_fail, _target(*after, outs + 1)
    else:
        yield m.p_sac_fail, _target(f, s, t, outs + 1)


@lru_cache(maxsize=256)
def _transition_matrix(m):
    M = np.zeros((24, 26))
    for state in live_states():
        for p, target in _outcomes(state, m):
            M[state.index, target] += p
    M.setflags(write=False)
    return M


def transition_matrix(m):
    """ 24 x 26 transition probabilities: live states by index, then SCORED and THREE_OUTS """
    return _transition_matrix(m).copy()


@lru_cache(maxsize=256)
def _score_probs(m):
    M = _transition_matrix(m)
    Q, r = M[:, :24], M[:, SCORED]
    try:
        x = solve(np.eye(24) - Q, r)
    except LinAlgError as exc:
        raise SimulatorError('Singular half-inning chain: {}'.format(exc))
    if not np.isfinite(x).all():
        raise SimulatorError('Singular half-inning chain')
    x = np.clip(x, 0.0, 1.0)
    x.setflags(write=False)
    return x


def score_probs(m):
    """ Probability of at least one run before the third out, for all 24 states in index order """
    return _score_probs(m).copy()


def score_prob(state, m):
    return float(_score_probs(m)[state.index])


def _cumulative(m):
    M = _transition_matrix(m)
    cum = np.cumsum(M / M.sum(axis=1, keepdims=True), axis=1)
    cum[:, -1] = 1.0
    return cum


def simulate_half_inning(state, m, rng):
    """ One sampled trajectory from state until a run scores or the third out """
    cum = _cumulative(m)
    trajectory = [state]
    current = state.index
    while True:
        target = int(np.searchsorted(cum[current], rng.random(), side='right'))
        if target == SCORED:
            return HalfInningResult(True, trajectory)
        if target == THREE_OUTS:
            trajectory.append(BaseOutState(outs=3))
            return HalfInningResult(False, trajectory)
        current = target
        trajectory.append(BaseOutState.from_index(current))


def _block(block, start, m, seed, block_size, n_trials):
    size = min(block_size, n_trials - block * block_size)
    rng = np.random.default_rng([seed, block])
    cum = _cumulative(m)
    current = np.full(size, start)
    scored = 0
    while len(current):
        u = rng.random(len(current))
        target = (u[:, None] >= cum[current]).sum(axis=1)
        scored += int(np.sum(target == SCORED))
        current = target[target < SCORED]
    return scored


def monte_carlo_score_prob(state, m, n_trials, seed, n_workers=1, block_size=None):
    """ Vectorised Monte Carlo estimate of score_prob

    Trials run in blocks; block k draws from numpy.random.default_rng([seed, k]) so the
    count does not depend on n_workers.

    Returns
    -------
    (estimate, standard error)
    """
    block_size = block_size or global_config.MonteCarloBlockSize
    n_blocks = -(-n_trials // block_size)
    task = partial(_block, start=state.index, m=m, seed=seed, block_size=block_size, n_trials=n_trials)
    counts = distributed_map(task, range(n_blocks), n_workers)
    p = sum(counts) / n_trials
    return p, float(np.sqrt(p * (1 - p) / n_trials))


def sac_failure_state(m):
    """ State after a failed sacrifice from runner-on-second, no outs """
    if m.sac_fail_mode == 'lead_runner_out':
        return BaseOutState(first=True, outs=1)
    return BaseOutState(second=True, outs=1)


def bunt_policy_value(m, p_sac_success):
    """ (P(run) when bunting once, P(run) when swinging away) from runner on second, no outs """
    if not 0 <= p_sac_success <= 1:
        raise SimulatorError('p_sac_success must be a probability')
    swing = score_prob(BaseOutState(second=True), m)
    bunt = p_sac_success * score_prob(BaseOutState(third=True, outs=1), m) + \
        (1 - p_sac_success) * score_prob(sac_failure_state(m), m)
    return bunt, swing


def _scaled(m, scale, out_scores_from_third):
    changes = {o: getattr(m, o) * scale for o in ON_BASE_OUTCOMES}
    rest = sum(changes.values()) + m.p_sac_success + m.p_sac_fail
    changes['p_out'] = 1 - rest
    changes['out_scores_from_third'] = out_scores_from_third
    return replace(m, **changes)


def calibrate_event_model(m, target_bunt, target_swing, p_sac_success, tolerance=1e-6):
    """ Scale the on-base outcomes of m and choose out_scores_from_third so that
    bunt_policy_value(result, p_sac_success) == (target_bunt, target_swing)
    """
    on_base = sum(getattr(m, o) for o in ON_BASE_OUTCOMES)
    if on_base == 0:
        raise SimulatorError('Model has no on-base outcomes to scale')
    max_scale = (1 - m.p_sac_success - m.p_sac_fail) / on_base

    def residual(x):
        bunt, swing = bunt_policy_value(_scaled(m, x[0], x[1]), p_sac_success)
        return [bunt - target_bunt, swing - target_swing]

    fit = least_squares(residual, x0=[min(1.0, 0.99 * max_scale), 0.5], bounds=([0, 0], [max_scale, 1]), xtol=1e-14,
                        ftol=1e-14, gtol=1e-14)
    if np.max(np.abs(fit.fun)) > tolerance:
        raise SimulatorError('Targets bunt={} swing={} unreachable (closest {})'.format(
            target_bunt, target_swing, [t + f for t, f in zip((target_bunt, target_swing), fit.fun)]))
    logger.info('Calibrated scale %.6f, out_scores_from_third %.6f', fit.x[0], fit.x[1])
    return _scaled(m, fit.x[0], fit.x[1])
