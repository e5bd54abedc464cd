"""
exceptions.py
Exception hierarchy shared by all walkoff sub-packages.
"""


class WalkoffError(Exception):
    pass


class EventFileError(WalkoffError, ValueError):
    """ A record in an event file could not be parsed """
    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        location = ''
        if path is not None:
            location = '{}:'.format(path)
        if lineno is not None:
            location += 'line {}: '.format(lineno)
        super().__init__(location + message)


class EventStructureError(EventFileError):
    pass


class ReplayError(WalkoffError):
    """ The play-by-play account of a game is internally inconsistent """
    def __init__(self, message, game_id='', play_index=None):
        self.game_id = game_id
        self.play_index = play_index
        super().__init__('{} (play {}): {}'.format(game_id, play_index, message))


class SchemaError(WalkoffError, KeyError):
    def __init__(self, column, source=''):
        self.column = column
        msg = 'Required column "{}" missing'.format(column)
        if source:
            msg += ' in {}'.format(source)
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class UndefinedCovariateError(WalkoffError, ValueError):
    pass


class SingularMatrixError(WalkoffError):
    def __init__(self, message, columns=()):
        self.columns = list(columns)
        if self.columns:
            message += ' (collinear columns: {})'.format(', '.join(self.columns))
        super().__init__(message)


class ConvergenceError(WalkoffError):
    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class ZeroCellError(WalkoffError):
    pass


class PipelineError(WalkoffError):
    pass


class ConfigError(WalkoffError, ValueError):
    def __init__(self, message, key=None):
        self.key = key
        super().__init__(message)


class SimulatorError(WalkoffError):
    pass


class DesignError(WalkoffError, ValueError):
    """ Design matrix, response or weights unusable for a fit """
    pass
