"""
replay.py
Reconstructs score, outs and base occupancy before and after every play of a game
"""
import logging
import re
from dataclasses import dataclass

import pandas as pd

from ..base import BaseOutState
from ..constants import GhostRunnerFirstSeason
from ..exceptions import ReplayError
from .events import classify_bunt, event_code, split_event

logger = logging.getLogger(__name__)

__all__ = [
    'PlayContext', 'PlayOutcome', 'apply_event', 'replay_game', 'replay_games', 'contexts_frame', 'write_context_csv'
]

ADVANCE_RE = re.compile(r'^([B123])([-X])([123H])((?:\([^)]*\))*)$')
PAREN_RE = re.compile(r'\(([^)]*)\)')
ERROR_IN_PAREN_RE = re.compile(r'^\d*E\d*[/A-Z]*$')
FIELDING_SEGMENT_RE = re.compile(r'(\d+)(?:\(([123B])\))?')
STEAL_RE = re.compile(r'^(SB|CS|POCS|PO)([123H])((?:\([^)]*\))*)$')

HOME = 4
OUT = 0

BATTER_TO_FIRST = frozenset(['W', 'IW', 'I', 'HP', 'C', 'E', 'FC'])
HITS = {'S': 1, 'D': 2, 'DGR': 2, 'T': 3, 'H': HOME, 'HR': HOME}
RUNNER_EVENTS = frozenset(['SB', 'CS', 'PO', 'POCS', 'WP', 'PB', 'BK', 'DI', 'OA', 'FLE', 'NP'])
BASE_NUMBER = {'1': 1, '2': 2, '3': 3, 'H': HOME}


@dataclass(frozen=True)
class PlayContext:
    game_id: str
    play_index: int
    inning: int
    half: int
    state_before: BaseOutState
    score_home: int
    score_away: int
    runs_on_play: int
    state_after: BaseOutState
    bunt_flag: bool
    is_plate_appearance_end: bool
    event_text: str = ''
    batter_id: str = ''
    pitcher_id: str = ''
    pitches: str = ''


@dataclass(frozen=True)
class PlayOutcome:
    state_after: BaseOutState
    runs: int
    is_plate_appearance_end: bool


def _error_negates(parens):
    return any(ERROR_IN_PAREN_RE.match(p) for p in parens)


def _runner_event(token, moves, bases):
    """ Implied runner movement of SB/CS/PO/POCS/BK tokens; moves maps origin -> destination (OUT = 0) """
    if token.startswith('BK'):
        for base in (1, 2, 3):
            if bases[base]:
                moves.setdefault(base, base + 1)
        return
    match = STEAL_RE.match(token)
    if not match:
        return
    kind, target, parens = match.group(1), BASE_NUMBER[match.group(2)], PAREN_RE.findall(match.group(3))
    safe = _error_negates(parens)
    if kind == 'SB':
        moves[target - 1] = target
    elif kind == 'CS':
        moves[target - 1] = target if safe else OUT
    elif kind == 'POCS':
        moves[target - 1] = target if safe else OUT
    elif kind == 'PO':
        moves[target] = target if safe else OUT


def _primary_moves(primary, bases):
    """ Returns (batter destination or None if the batter stays at the plate, implied runner moves, PA end) """
    moves = {}
    main, _, secondary = primary.partition('+')
    code = event_code(main)

    if code in HITS:
        return HITS[code], moves, True
    if code in BATTER_TO_FIRST:
        return 1, moves, True
    if code == 'K' or code in ('W', 'IW', 'I'):
        for token in secondary.split(';'):
            _runner_event(token, moves, bases)
        return (OUT if code == 'K' else 1), moves, True
    if code == '':
        segments = FIELDING_SEGMENT_RE.findall(main)
        if not segments:
            raise ValueError('unrecognized event "{}"'.format(primary))
        batter = 1 if 'E' in main else None
        batter_marked = False
        for _, mark in segments:
            if mark == 'B':
                batter_marked = True
            elif mark:
                moves[int(mark)] = OUT
        if batter is None:
            batter = OUT if (batter_marked or not segments[-1][1]) else 1
        return batter, moves, True
    if code in RUNNER_EVENTS:
        for token in main.split(';'):
            _runner_event(token, moves, bases)
        return None, moves, False
    raise ValueError('unrecognized event "{}"'.format(primary))


def apply_event(event_text, state):
    """ Apply one event to a live BaseOutState.

    Explicit advances after the '.' override everything the primary event implies.
    Runners that were not moved are pushed ahead of the runner (or batter) behind
    them, which yields the forced advances of walks, hits and force plays.
    """
    if state.outs >= 3:
        raise ValueError('play after three outs')
    primary, _, advances = split_event(event_text)
    bases = {1: state.first, 2: state.second, 3: state.third}
    batter, moves, pa_end = _primary_moves(primary, bases)
    explicit = set()

    for advance in advances:
        match = ADVANCE_RE.match(advance)
        if not match:
            raise ValueError('unrecognized advance "{}"'.format(advance))
        origin, kind, target, parens = match.groups()
        destination = BASE_NUMBER[target]
        if kind == 'X' and not _error_negates(PAREN_RE.findall(parens)):
            destination = OUT
        if origin == 'B':
            batter = destination
            continue
        origin = int(origin)
        if not bases[origin]:
            raise ValueError('advance from unoccupied base {}'.format(origin))
        moves[origin] = destination
        explicit.add(origin)

    for origin in moves:
        if not bases[origin]:
            raise ValueError('runner event from unoccupied base {}'.format(origin))

    outs = state.outs + int(batter == OUT) + sum(1 for dest in moves.values() if dest == OUT)
    if outs > 3:
        raise ValueError('{} outs'.format(outs))

    runs = int(batter == HOME)
    occupied = set()
    if batter not in (None, OUT, HOME):
        occupied.add(batter)
    behind = batter if batter not in (None, OUT) else 0
    for origin in (1, 2, 3):
        if not bases[origin]:
            continue
        destination = moves.get(origin, origin)
        if destination == OUT:
            continue
        if origin not in explicit:
            destination = max(destination, behind + 1)
        behind = destination
        if destination >= HOME:
            # forced-in runs do not count once the third out is made
            if origin in explicit or outs < 3:
                runs += 1
            continue
        if destination in occupied:
            raise ValueError('two runners on base {}'.format(destination))
        occupied.add(destination)

    if outs == 3:
        after = BaseOutState(outs=3)
    else:
        after = BaseOutState(1 in occupied, 2 in occupied, 3 in occupied, outs)
    return PlayOutcome(after, runs, pa_end)


def replay_game(game):
    """ Replay every play of a GameAccount; sets game.final_home_runs / final_away_runs

    Returns
    -------
    list of PlayContext, one per play
    """
    contexts = []
    score = [0, 0]
    current = None
    state = BaseOutState()
    ghost = game.season >= GhostRunnerFirstSeason
    for index, play in enumerate(game.plays):
        if (play.inning, play.half) != current:
            if current is not None and (play.inning, play.half) < current:
                raise ReplayError('plays out of inning order', game.game_id, index)
            current = (play.inning, play.half)
            state = BaseOutState(second=ghost and play.inning > game.scheduled_innings)

        if state.outs >= 3:
            if event_code(play.event_text) == 'NP':
                continue
            raise ReplayError('play after three outs', game.game_id, index)

        try:
            outcome = apply_event(play.event_text, state)
        except ValueError as exc:
            raise ReplayError(str(exc), game.game_id, index) from None

        contexts.append(
            PlayContext(game_id=game.game_id,
                        play_index=index,
                        inning=play.inning,
                        half=play.half,
                        state_before=state,
                        score_home=score[1],
                        score_away=score[0],
                        runs_on_play=outcome.runs,
                        state_after=outcome.state_after,
                        bunt_flag=outcome.is_plate_appearance_end and classify_bunt(play.event_text),
                        is_plate_appearance_end=outcome.is_plate_appearance_end,
                        event_text=play.event_text,
                        batter_id=play.batter_id,
                        pitcher_id=play.pitcher_id,
                        pitches=play.pitches))
        score[play.half] += outcome.runs
        state = outcome.state_after

    game.final_away_runs, game.final_home_runs = score
    return contexts


def replay_games(games):
    """ Replay a list of games, collecting inconsistencies instead of raising

    Returns
    -------
    contexts: dict game_id -> list of PlayContext
    errors: list of ReplayError
    """
    contexts, errors = {}, []
    for game in games:
        try:
            contexts[game.game_id] = replay_game(game)
        except ReplayError as exc:
            logger.warning('Replay inconsistency: %s', exc)
            errors.append(exc)
    return contexts, errors


def contexts_frame(contexts):
    rows = [{
        'game_id': c.game_id,
        'play_index': c.play_index,
        'inning': c.inning,
        'half': c.half,
        'outs': c.state_before.outs,
        'b1': int(c.state_before.first),
        'b2': int(c.state_before.second),
        'b3': int(c.state_before.third),
        'score_away': c.score_away,
        'score_home': c.score_home,
        'event_text': c.event_text,
        'bunt_flag': int(c.bunt_flag)
    } for c in contexts]
    return pd.DataFrame(rows,
                        columns=[
                            'game_id', 'play_index', 'inning', 'half', 'outs', 'b1', 'b2', 'b3', 'score_away',
                            'score_home', 'event_text', 'bunt_flag'
                        ])


def write_context_csv(contexts, path):
    contexts_frame(contexts).to_csv(path, index=False, lineterminator='\n')
