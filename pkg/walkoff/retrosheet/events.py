"""
events.py
Reading and writing Retrosheet event files (.EVN/.EVA)
"""
import glob
import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..constants import BuntModifiers
from ..exceptions import EventFileError, EventStructureError

logger = logging.getLogger(__name__)

__all__ = [
    'PlayRecord', 'Appearance', 'GameAccount', 'EventFileParser', 'parse_event_file', 'read_event_file',
    'read_event_directory', 'event_file_paths', 'serialize_event_file', 'classify_bunt', 'split_event', 'event_code'
]

# '/'-separated tokens, slashes inside parentheses do not split ("E2/TH" in "(E2/TH)")
MODIFIER_RE = re.compile(r'(?:[^/(]|\([^)]*\))+')
EVENT_CODE_RE = re.compile(r'^([A-Z]*)')
BUNT_MODIFIER_RE = re.compile(r'^({})(\d[0-9A-Z]*)?$'.format('|'.join(sorted(BuntModifiers, key=len, reverse=True))))

# Primary events that do not put a ball in fair play
NOT_IN_PLAY = frozenset(
    ['K', 'W', 'IW', 'I', 'HP', 'NP', 'C', 'SB', 'CS', 'PO', 'POCS', 'WP', 'PB', 'BK', 'DI', 'OA', 'FLE'])

NEUTRAL_RECORDS = frozenset(['com', 'badj', 'padj', 'ladj', 'radj', 'presadj'])
FIELD_COUNTS = {'id': 2, 'version': 2, 'start': 6, 'sub': 6, 'play': 7, 'data': 4}


@dataclass
class PlayRecord:
    inning: int
    half: int
    batter_id: str
    count: str
    pitches: str
    event_text: str
    pitcher_id: str = ''
    lineno: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass
class Appearance:
    """ A start or sub record """
    player_id: str
    name: str
    team: int
    batting_order: int
    position: int


@dataclass
class GameAccount:
    game_id: str
    season: int
    info: Dict[str, str] = field(default_factory=dict)
    plays: List[PlayRecord] = field(default_factory=list)
    version: str = ''
    starts: List[Appearance] = field(default_factory=list)
    # (index of the play the substitution precedes, appearance)
    subs: List[Tuple[int, Appearance]] = field(default_factory=list)
    data: List[Tuple[str, str, str]] = field(default_factory=list)
    final_home_runs: Optional[int] = field(default=None, compare=False)
    final_away_runs: Optional[int] = field(default=None, compare=False)

    @property
    def home_team(self):
        return self.info.get('hometeam', self.game_id[:3])

    @property
    def visiting_team(self):
        return self.info.get('visteam', '')

    @property
    def game_type(self):
        return self.info.get('gametype', 'regular')

    @property
    def scheduled_innings(self):
        try:
            return int(self.info.get('innings', 9) or 9)
        except ValueError:
            return 9


def season_from_game_id(game_id, info=None):
    if len(game_id) >= 7 and game_id[3:7].isdigit():
        return int(game_id[3:7])
    date = (info or {}).get('date', '')
    if date[:4].isdigit():
        return int(date[:4])
    return 0


class EventFileParser():
    """ Line-oriented parser for the Retrosheet event-file grammar.

    After parse() the counter `skipped` holds the number of records of each
    unknown type that were ignored.
    """
    def __init__(self, path=None):
        self.path = path
        self.skipped = Counter()

    def _error(self, message, lineno, structural=False):
        cls = EventStructureError if structural else EventFileError
        return cls(message, lineno=lineno, path=self.path)

    def parse(self, stream):
        if isinstance(stream, str):
            stream = stream.splitlines()

        games = []
        game = None
        pitchers = {}
        for lineno, line in enumerate(stream, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(',')
            kind = fields[0]

            if kind in NEUTRAL_RECORDS:
                continue
            if kind == 'info':
                if len(fields) < 2:
                    raise self._error('info record needs a key', lineno)
                if game is None:
                    raise self._error('info record before any id record', lineno, structural=True)
                game.info[fields[1]] = ','.join(fields[2:])
                continue
            if kind not in FIELD_COUNTS:
                self.skipped[kind] += 1
                continue
            if len(fields) != FIELD_COUNTS[kind]:
                raise self._error('{} record has {} fields, expected {}'.format(kind, len(fields), FIELD_COUNTS[kind]),
                                  lineno)

            if kind == 'id':
                game = GameAccount(game_id=fields[1], season=season_from_game_id(fields[1]))
                games.append(game)
                pitchers = {}
                continue
            if game is None:
                raise self._error('{} record before any id record'.format(kind), lineno, structural=True)

            if kind == 'version':
                game.version = fields[1]
            elif kind in ('start', 'sub'):
                appearance = self._appearance(fields, lineno)
                if appearance.position == 1:
                    pitchers[appearance.team] = appearance.player_id
                if kind == 'start':
                    game.starts.append(appearance)
                else:
                    game.subs.append((len(game.plays), appearance))
            elif kind == 'play':
                play = self._play(fields, lineno)
                play.pitcher_id = pitchers.get(1 - play.half, '')
                if game.plays:
                    last = game.plays[-1]
                    if (play.inning, play.half) < (last.inning, last.half):
                        raise self._error('play out of inning order', lineno)
                game.plays.append(play)
            elif kind == 'data':
                game.data.append(tuple(fields[1:]))

        for game in games:
            if not game.season:
                game.season = season_from_game_id(game.game_id, game.info)
        if self.skipped:
            logger.warning('%s: skipped unknown records %s', self.path or '<stream>', dict(self.skipped))
        return games

    def _appearance(self, fields, lineno):
        try:
            return Appearance(player_id=fields[1],
                              name=fields[2].strip('"'),
                              team=int(fields[3]),
                              batting_order=int(fields[4]),
                              position=int(fields[5]))
        except ValueError:
            raise self._error('non-numeric team, batting order or position', lineno)

    def _play(self, fields, lineno):
        try:
            inning, half = int(fields[1]), int(fields[2])
        except ValueError:
            raise self._error('non-numeric inning or half', lineno)
        if inning < 1 or half not in (0, 1):
            raise self._error('inning must be positive and half 0 or 1', lineno)
        if not fields[6]:
            raise self._error('empty event text', lineno)
        return PlayRecord(inning=inning,
                          half=half,
                          batter_id=fields[3],
                          count=fields[4],
                          pitches=fields[5],
                          event_text=fields[6],
                          lineno=lineno)


def parse_event_file(stream, path=None):
    """ Parse event-file text (a string or an iterable of lines) into GameAccounts """
    return EventFileParser(path).parse(stream)


def read_event_file(path):
    with open(path, 'r') as handle:
        return parse_event_file(handle, path=path)


def event_file_paths(directory):
    """ Event files (*.EV?, any case) in directory, in file-name order """
    if not os.path.isdir(directory):
        raise FileNotFoundError('No such directory: {}'.format(directory))
    return sorted(p for p in glob.glob(os.path.join(directory, '*')) if re.search(r'\.ev[a-z]$', p, re.IGNORECASE))


def read_event_directory(directory):
    games = []
    for path in event_file_paths(directory):
        games.extend(read_event_file(path))
    return games


def _appearance_line(kind, appearance):
    return '{},{},"{}",{},{},{}'.format(kind, appearance.player_id, appearance.name, appearance.team,
                                        appearance.batting_order, appearance.position)


def serialize_event_file(games):
    """ Inverse of parse_event_file """
    lines = []
    for game in games:
        lines.append('id,{}'.format(game.game_id))
        if game.version:
            lines.append('version,{}'.format(game.version))
        lines += ['info,{},{}'.format(key, value) for key, value in game.info.items()]
        lines += [_appearance_line('start', a) for a in game.starts]
        subs = sorted(game.subs, key=lambda s: s[0])
        isub = 0
        for iplay, play in enumerate(game.plays):
            while isub < len(subs) and subs[isub][0] <= iplay:
                lines.append(_appearance_line('sub', subs[isub][1]))
                isub += 1
            lines.append('play,{},{},{},{},{},{}'.format(play.inning, play.half, play.batter_id, play.count,
                                                         play.pitches, play.event_text))
        lines += [_appearance_line('sub', s[1]) for s in subs[isub:]]
        lines += ['data,{}'.format(','.join(d)) for d in game.data]
    return '\n'.join(lines) + '\n'


def split_event(event_text):
    """ Split event text into (primary event, modifiers, advances) """
    batter_part, _, advance_part = event_text.partition('.')
    tokens = MODIFIER_RE.findall(batter_part)
    primary = tokens[0] if tokens else ''
    advances = [a for a in advance_part.split(';') if a]
    return primary, tokens[1:], advances


def event_code(primary):
    """ Leading letters of a primary event: 'S' for 'S8', '' for a fielding out like '63' """
    return EVENT_CODE_RE.match(primary).group(1)


def classify_bunt(event_text):
    """ True iff the event is a ball in fair play carrying a bunt modifier """
    primary, modifiers, _ = split_event(event_text)
    if event_code(primary.split('+')[0]) in NOT_IN_PLAY:
        return False
    for modifier in modifiers:
        if BUNT_MODIFIER_RE.match(modifier.rstrip('#!?+-')):
            return True
    return False
