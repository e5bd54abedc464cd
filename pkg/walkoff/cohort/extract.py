"""
extract.py
Selection of the analysis cohort: the first plate appearance of the home half of a
tied extra inning that starts with the ghost runner on second
"""
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import groupby
from typing import List, Optional

from ..base import BaseOutState
from ..constants import BOTTOM, ExtraInningStart, GhostRunnerFirstSeason
from ..exceptions import PipelineError, ReplayError, UndefinedCovariateError
from ..retrosheet import replay_game
from ..stats import CovariateTriple, covariates_for

logger = logging.getLogger(__name__)

__all__ = [
    'ResultCategory', 'CohortRecord', 'ExtractionReport', 'JoinReport', 'extract_situations', 'classify_result',
    'join_covariates', 'GHOST_RUNNER_START'
]

GHOST_RUNNER_START = BaseOutState(second=True, outs=0)


class ResultCategory(Enum):
    RUN_SCORES = 'RUN_SCORES'
    FIRST_AND_THIRD_NO_OUTS = 'FIRST_AND_THIRD_NO_OUTS'
    FIRST_AND_SECOND_NO_OUTS = 'FIRST_AND_SECOND_NO_OUTS'
    THIRD_ONE_OUT = 'THIRD_ONE_OUT'
    OTHER = 'OTHER'

    @property
    def favorable(self):
        return self is not ResultCategory.OTHER


FAVORABLE_STATES = {
    BaseOutState(True, False, True, 0): ResultCategory.FIRST_AND_THIRD_NO_OUTS,
    BaseOutState(True, True, False, 0): ResultCategory.FIRST_AND_SECOND_NO_OUTS,
    BaseOutState(False, False, True, 1): ResultCategory.THIRD_ONE_OUT,
}


@dataclass(frozen=True)
class CohortRecord:
    game_id: str
    season: int
    inning: int
    batter_id: str
    pitcher_id: str
    A: int
    Y: int
    result_category: ResultCategory
    covariates: Optional[CovariateTriple] = None
    propensity: Optional[float] = None
    weight: Optional[float] = None
    pitches: str = field(default='', compare=False)


@dataclass
class ExtractionReport:
    games_seen: int = 0
    games_replayed: int = 0
    games_skipped_season: int = 0
    games_skipped_nonregular: int = 0
    qualifying_halves: int = 0
    errors: List[ReplayError] = field(default_factory=list)

    @property
    def games_with_errors(self):
        return len(self.errors)


@dataclass
class JoinReport:
    joined: int = 0
    reasons: Counter = field(default_factory=Counter)

    @property
    def excluded(self):
        return sum(self.reasons.values())


def classify_result(context):
    """ Map the (merged) context of a first plate appearance to a ResultCategory """
    if context.runs_on_play >= 1:
        return ResultCategory.RUN_SCORES
    return FAVORABLE_STATES.get(context.state_after, ResultCategory.OTHER)


def _first_plate_appearance(contexts):
    """ Merge every play up to and including the first plate-appearance end into one context.
    A half that ends without a completed plate appearance yields its terminal context.
    """
    for end, context in enumerate(contexts):
        if context.is_plate_appearance_end:
            break
    runs = sum(c.runs_on_play for c in contexts[:end + 1])
    return replace(contexts[end],
                   state_before=contexts[0].state_before,
                   score_home=contexts[0].score_home,
                   score_away=contexts[0].score_away,
                   runs_on_play=runs)


def _check_seasons(seasons):
    early = sorted(s for s in seasons if s < GhostRunnerFirstSeason)
    if early:
        raise PipelineError('Seasons {} predate the extra-inning ghost runner ({}+)'.format(
            early, GhostRunnerFirstSeason))


def _game_situations(game, contexts):
    records = []
    for (inning, half), plays in groupby(contexts, key=lambda c: (c.inning, c.half)):
        plays = list(plays)
        start = plays[0]
        if inning < ExtraInningStart or half != BOTTOM:
            continue
        if start.state_before != GHOST_RUNNER_START or start.score_home != start.score_away:
            continue
        first_pa = _first_plate_appearance(plays)
        records.append(
            CohortRecord(game_id=game.game_id,
                         season=game.season,
                         inning=inning,
                         batter_id=first_pa.batter_id,
                         pitcher_id=first_pa.pitcher_id,
                         A=int(first_pa.is_plate_appearance_end and first_pa.bunt_flag),
                         Y=int(sum(c.runs_on_play for c in plays) >= 1),
                         result_category=classify_result(first_pa),
                         pitches=first_pa.pitches if first_pa.is_plate_appearance_end else ''))
    return records


def extract_situations(games, seasons=None, return_report=False):
    """ Cohort records for every qualifying half-inning of games

    Parameters
    ----------
    games: list of GameAccount
    seasons: set of int, optional
        Restrict to these seasons; all must lie in the ghost-runner era
    return_report: bool
        Also return an ExtractionReport

    Returns
    -------
    list of CohortRecord sorted by (game_id, inning) [, ExtractionReport]
    """
    if seasons is not None:
        seasons = set(seasons)
        _check_seasons(seasons)
    report = ExtractionReport()
    records = []
    for game in games:
        report.games_seen += 1
        if seasons is not None and game.season not in seasons:
            report.games_skipped_season += 1
            continue
        if game.season < GhostRunnerFirstSeason:
            report.games_skipped_season += 1
            continue
        if game.game_type != 'regular':
            report.games_skipped_nonregular += 1
            continue
        try:
            contexts = replay_game(game)
        except ReplayError as exc:
            logger.warning('Skipping game: %s', exc)
            report.errors.append(exc)
            continue
        report.games_replayed += 1
        records.extend(_game_situations(game, contexts))

    records.sort(key=lambda r: (r.game_id, r.inning))
    report.qualifying_halves = len(records)
    logger.info('%d qualifying situations in %d games (%d with replay errors)', len(records), report.games_seen,
                report.games_with_errors)
    if return_report:
        return records, report
    return records


def join_covariates(records, batting_map, pitching_map, people=None):
    """ Attach a CovariateTriple to every record; records that cannot be joined are dropped

    Parameters
    ----------
    people: dict, optional
        Retrosheet id -> Lahman id; ids are assumed shared when not given

    Returns
    -------
    (list of CohortRecord, JoinReport)
    """
    people = people or {}
    report = JoinReport()
    joined = []
    for record in records:
        batter = batting_map.get((people.get(record.batter_id, record.batter_id), record.season))
        pitcher = pitching_map.get((people.get(record.pitcher_id, record.pitcher_id), record.season))
        if batter is None:
            report.reasons['missing_batter'] += 1
            continue
        if pitcher is None:
            report.reasons['missing_pitcher'] += 1
            continue
        try:
            covariates = covariates_for(batter, pitcher)
        except UndefinedCovariateError as exc:
            logger.debug('%s inning %d: %s', record.game_id, record.inning, exc)
            report.reasons['undefined_covariate'] += 1
            continue
        joined.append(replace(record, covariates=covariates))

    report.joined = len(joined)
    if report.excluded:
        logger.warning('Covariate join excluded %d of %d records %s', report.excluded, len(records),
                       dict(report.reasons))
    return joined, report
