"""
season.py
Lahman-style season tables and the three covariates derived from them
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from ..exceptions import SchemaError, UndefinedCovariateError

logger = logging.getLogger(__name__)

__all__ = [
    'BattingSeason', 'PitchingSeason', 'CovariateTriple', 'load_batting', 'load_pitching', 'load_people',
    'compute_ops', 'compute_sac_rate', 'compute_era', 'covariates_for', 'covariate_table'
]

BATTING_COLUMNS = {'AB': 'AB', 'H': 'H', '2B': 'doubles', '3B': 'triples', 'HR': 'HR', 'BB': 'BB', 'HBP': 'HBP',
                   'SF': 'SF', 'SH': 'SH'}
PITCHING_COLUMNS = {'ER': 'earned_runs', 'IPouts': 'outs_recorded'}
KEY_COLUMNS = ['playerID', 'yearID']


@dataclass(frozen=True)
class BattingSeason:
    player_id: str
    season: int
    AB: int = 0
    H: int = 0
    doubles: int = 0
    triples: int = 0
    HR: int = 0
    BB: int = 0
    HBP: int = 0
    SF: int = 0
    SH: int = 0

    @property
    def plate_appearances(self):
        return self.AB + self.BB + self.HBP + self.SF + self.SH


@dataclass(frozen=True)
class PitchingSeason:
    player_id: str
    season: int
    earned_runs: int = 0
    outs_recorded: int = 0


class CovariateTriple(NamedTuple):
    ops: float
    sac_rate: float
    era: float


def _read_table(source, columns):
    table = pd.read_csv(source, dtype={'playerID': str})
    for column in KEY_COLUMNS + list(columns):
        if column not in table.columns:
            raise SchemaError(column, source if isinstance(source, str) else '')
    table = table[KEY_COLUMNS + list(columns)].copy()
    for column in columns:
        table[column] = pd.to_numeric(table[column], errors='coerce').fillna(0).astype(int)
    table['yearID'] = table['yearID'].astype(int)
    # stints (one row per team a player appeared for) are summed
    return table.groupby(KEY_COLUMNS, sort=True).sum().rename(columns=columns)


def load_batting(source):
    """ Read a Lahman Batting table

    Returns
    -------
    dict {(player_id, season): BattingSeason}
    """
    table = _read_table(source, BATTING_COLUMNS)
    return {(pid, int(season)): BattingSeason(pid, int(season), **{k: int(v) for k, v in row.items()})
            for (pid, season), row in table.iterrows()}


def load_pitching(source):
    table = _read_table(source, PITCHING_COLUMNS)
    return {(pid, int(season)): PitchingSeason(pid, int(season), **{k: int(v) for k, v in row.items()})
            for (pid, season), row in table.iterrows()}


def load_people(source):
    """ Map Retrosheet ids to Lahman ids using a Lahman People table """
    table = pd.read_csv(source, dtype=str)
    for column in ('playerID', 'retroID'):
        if column not in table.columns:
            raise SchemaError(column, source if isinstance(source, str) else '')
    table = table.dropna(subset=['playerID', 'retroID'])
    return dict(zip(table['retroID'], table['playerID']))


def compute_ops(b):
    """ On-base plus slugging """
    obp_denominator = b.AB + b.BB + b.HBP + b.SF
    if b.AB <= 0 or obp_denominator <= 0:
        raise UndefinedCovariateError('OPS undefined for {} in {}: no at bats'.format(b.player_id, b.season))
    obp = (b.H + b.BB + b.HBP) / obp_denominator
    singles = b.H - b.doubles - b.triples - b.HR
    total_bases = singles + 2 * b.doubles + 3 * b.triples + 4 * b.HR
    return obp + total_bases / b.AB


def compute_sac_rate(b):
    """ Sacrifice hits per 100 plate appearances """
    if b.plate_appearances <= 0:
        raise UndefinedCovariateError('Sacrifice rate undefined for {} in {}: no plate appearances'.format(
            b.player_id, b.season))
    return 100 * b.SH / b.plate_appearances


def compute_era(p):
    if p.outs_recorded <= 0:
        raise UndefinedCovariateError('ERA undefined for {} in {}: no outs recorded'.format(p.player_id, p.season))
    return 9 * p.earned_runs / (p.outs_recorded / 3)


def covariates_for(batting, pitching):
    """ CovariateTriple for one batter season and one pitcher season """
    return CovariateTriple(compute_ops(batting), compute_sac_rate(batting), compute_era(pitching))


def _or_nan(func, record):
    try:
        return func(record)
    except UndefinedCovariateError:
        return np.nan


def covariate_table(batting, pitching):
    """ One row per player season present in either map; undefined covariates are NaN """
    keys = sorted(set(batting) | set(pitching))
    rows = []
    for key in keys:
        b, p = batting.get(key), pitching.get(key)
        rows.append({
            'player_id': key[0],
            'season': key[1],
            'ops': _or_nan(compute_ops, b) if b else np.nan,
            'sac_rate': _or_nan(compute_sac_rate, b) if b else np.nan,
            'era': _or_nan(compute_era, p) if p else np.nan,
        })
    return pd.DataFrame(rows, columns=['player_id', 'season', 'ops', 'sac_rate', 'era'])
