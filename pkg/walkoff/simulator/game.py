"""
game.py
Geometric model of extra-inning game length and the season-level value of the bunt decision
"""
from collections import Counter
from dataclasses import dataclass

import pandas as pd

from ..exceptions import SimulatorError

__all__ = [
    'GeometricGameModel', 'game_length_distribution', 'game_length_table', 'season_uplift', 'observed_extra_innings',
    'fit_geometric'
]


@dataclass(frozen=True)
class GeometricGameModel:
    """ r: probability that any given extra inning ends the game """
    r: float

    def __post_init__(self):
        if not 0 < self.r <= 1:
            raise SimulatorError('r must lie in (0, 1], got {}'.format(self.r))


def game_length_distribution(g, k):
    """ P(game lasts at least k extra innings) """
    if k < 1:
        raise SimulatorError('k counts extra innings and starts at 1')
    return (1 - g.r)**(k - 1)


def game_length_table(g, max_k=6, regulation=9):
    rows = []
    for k in range(1, max_k + 1):
        at_least = game_length_distribution(g, k)
        rows.append({
            'extra_innings': k,
            'inning': regulation + k,
            'p_at_least': at_least,
            'p_exactly': at_least * g.r,
            'p_within': 1 - game_length_distribution(g, k + 1)
        })
    return pd.DataFrame(rows)


def season_uplift(n_situations_per_season, p_bunt, p_swing, p_continue_win):
    """ Expected additional wins per season from bunting in every situation

    p_continue_win is the home team's eventual win probability when the inning ends scoreless.
    """
    for name, p in (('p_bunt', p_bunt), ('p_swing', p_swing), ('p_continue_win', p_continue_win)):
        if not 0 <= p <= 1:
            raise SimulatorError('{} must be a probability'.format(name))
    return n_situations_per_season * (p_bunt - p_swing) * (1 - p_continue_win)


def observed_extra_innings(games):
    """ Counter {extra innings played: games} over games that went to extra innings """
    counts = Counter()
    for game in games:
        if not game.plays:
            continue
        extra = max(p.inning for p in game.plays) - game.scheduled_innings
        if extra >= 1:
            counts[extra] += 1
    return counts


def fit_geometric(counts):
    """ Maximum-likelihood r from a Counter {extra innings: games} """
    games = sum(counts.values())
    innings = sum(k * n for k, n in counts.items())
    if games == 0:
        raise SimulatorError('No extra-inning games to fit')
    return GeometricGameModel(games / innings)
