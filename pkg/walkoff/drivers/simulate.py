import logging
import os
from dataclasses import asdict

import pandas as pd

from ..base import live_states
from ..exceptions import ConfigError
from ..formatter import write_report
from ..simulator import (EventModel, GeometricGameModel, bunt_policy_value, calibrate_event_model,
                         game_length_table, monte_carlo_score_prob, score_probs, season_uplift)
from ..utils import RunManifest, resolve_seed

logger = logging.getLogger(__name__)

__all__ = ['simulate_driver', 'score_table']

DefaultSacSuccess = 0.75
DefaultSituations = 4
DefaultContinueWin = 0.5


def score_table(m, trials=0, seed=None, n_workers=1):
    """ Exact P(at least one run) for all 24 live states, with Monte Carlo columns when trials > 0 """
    exact = score_probs(m)
    rows = []
    for state in live_states():
        row = {'state': state.label(), 'outs': state.outs, 'score_prob': exact[state.index]}
        if trials:
            estimate, se = monte_carlo_score_prob(state, m, trials, seed, n_workers=n_workers)
            row.update({'monte_carlo': estimate, 'mc_se': se, 'abs_diff': abs(estimate - exact[state.index])})
        rows.append(row)
    return pd.DataFrame(rows)


def simulate_driver(model=None,
                    r=0.72,
                    situations=DefaultSituations,
                    p_bunt=None,
                    p_swing=None,
                    p_continue_win=DefaultContinueWin,
                    p_sac_success=DefaultSacSuccess,
                    trials=0,
                    seed=None,
                    calibrate=False,
                    workers=1,
                    out='.'):
    """ Half-inning scoring probabilities, the bunt/swing comparison, extra-inning game
    length and the season-level uplift

    With calibrate the event model is rescaled so that its bunt and swing values hit
    p_bunt and p_swing; otherwise missing p_bunt / p_swing are taken from the model.
    """
    seed = resolve_seed(seed)
    m = EventModel.from_config(model)
    if calibrate:
        if p_bunt is None or p_swing is None:
            raise ConfigError('Calibration needs both p_bunt and p_swing', key='p_bunt')
        m = calibrate_event_model(m, p_bunt, p_swing, p_sac_success)

    model_bunt, model_swing = bunt_policy_value(m, p_sac_success)
    p_bunt = model_bunt if p_bunt is None else p_bunt
    p_swing = model_swing if p_swing is None else p_swing
    g = GeometricGameModel(r)

    manifest = RunManifest('simulate', seed, config=dict(m.to_config(), r=r, situations=situations,
                                                         p_continue_win=p_continue_win, p_sac_success=p_sac_success,
                                                         trials=trials, calibrate=int(calibrate)),
                           config_hash=m.to_config().get_hash())
    if isinstance(model, str):
        manifest.add_input(model)

    policy = pd.DataFrame([
        {'strategy': 'bunt', 'p_run': model_bunt},
        {'strategy': 'swing', 'p_run': model_swing},
    ])
    uplift = pd.DataFrame([{
        'situations_per_season': situations,
        'p_bunt': p_bunt,
        'p_swing': p_swing,
        'p_continue_win': p_continue_win,
        'extra_wins_per_season': season_uplift(situations, p_bunt, p_swing, p_continue_win)
    }])
    frames = {
        'P(at least one run) by base-out state': score_table(m, trials, seed, workers),
        'Runner on second, no outs: bunt once vs swing away': policy,
        'Extra-inning game length (r = {})'.format(r): game_length_table(g),
        'Season uplift': uplift
    }
    if calibrate:
        frames['Calibrated event model'] = pd.DataFrame([asdict(m)])

    write_report(frames, out, 'simulation', manifest, echo=True)
    manifest.save(os.path.join(out, 'manifest.json'))
    return frames
