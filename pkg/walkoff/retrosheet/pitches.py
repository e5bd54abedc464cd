"""
pitches.py
Pitch-sequence profiles used to audit whether a batter switched between bunting and swinging away
"""
from dataclasses import dataclass

__all__ = ['PitchProfile', 'pitch_profile', 'BUNT_CODES', 'SWING_CODES', 'TAKEN_CODES']

BUNT_CODES = frozenset('LMO')
SWING_CODES = frozenset('SFTQR')
TAKEN_CODES = frozenset('BCIPV')
IN_PLAY_CODES = frozenset('XY')
# pickoff throws, catcher pickoffs, blocked pitches, runner going, plays not involving the batter
MARKERS = str.maketrans('', '', '*+>.123')


@dataclass(frozen=True)
class PitchProfile:
    bunt_attempt_pitches: int = 0
    swing_pitches: int = 0
    taken_pitches: int = 0
    unknown: bool = False

    @property
    def switched_strategy(self):
        return self.bunt_attempt_pitches >= 1 and self.swing_pitches >= 1


def pitch_profile(pitches, bunt_flag):
    """ Count bunt attempts, swings and taken pitches of a pitch string

    The ball put in play counts as a bunt attempt when the plate appearance
    ended with a bunt, otherwise as a swing.
    """
    codes = (pitches or '').translate(MARKERS).strip()
    if not codes or set(codes) <= set('?U'):
        return PitchProfile(unknown=True)

    bunts = swings = taken = 0
    for code in codes:
        if code in BUNT_CODES:
            bunts += 1
        elif code in SWING_CODES:
            swings += 1
        elif code in TAKEN_CODES:
            taken += 1
        elif code in IN_PLAY_CODES:
            if bunt_flag:
                bunts += 1
            else:
                swings += 1
    return PitchProfile(bunts, swings, taken)
