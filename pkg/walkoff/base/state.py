from itertools import product
from typing import NamedTuple


class BaseOutState(NamedTuple):
    """ Base occupancy plus outs. outs == 3 only appears as the state after the
    final play of a half-inning; the 24 live states have outs in {0, 1, 2}.
    """
    first: bool = False
    second: bool = False
    third: bool = False
    outs: int = 0

    @property
    def bases(self):
        return (self.first, self.second, self.third)

    @property
    def is_live(self):
        return self.outs < 3

    @property
    def index(self):
        """ Position among the 24 live states: outs major, bases as a bit mask (first = 1) """
        if not self.is_live:
            raise ValueError('Terminal state has no live index')
        return 8 * self.outs + int(self.first) + 2 * int(self.second) + 4 * int(self.third)

    @classmethod
    def from_index(cls, index):
        if not 0 <= index < 24:
            raise ValueError('State index must lie in [0, 24)')
        outs, mask = divmod(index, 8)
        return cls(bool(mask & 1), bool(mask & 2), bool(mask & 4), outs)

    def label(self):
        marks = ''.join(str(b + 1) if occ else '_' for b, occ in enumerate(self.bases))
        return '{}:{}'.format(marks, self.outs)


def live_states():
    """ All 24 live states ordered by index """
    flags = (False, True)
    return [BaseOutState(f, s, t, outs) for outs, t, s, f in product(range(3), flags, flags, flags)]
