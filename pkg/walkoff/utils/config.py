"""
config.py
Flat key=value (or json) configuration files with per-kind defaults.
Event-model and synth defaults are the shipped data/event_model.cfg and data/synth.cfg.
"""
import hashlib
import json
import os
from collections.abc import Mapping, MutableMapping
from copy import deepcopy

from walkoff import config as global_config
from walkoff.constants import Covariates, TrimHigh, TrimLow
from walkoff.exceptions import ConfigError

default_config_pipeline = {
    'trim_lo': TrimLow,
    'trim_hi': TrimHigh,
    'propensity_covariates': Covariates,
    'outcome_covariates': Covariates,
    'bootstrap_replicates': 2000,
    'seed': global_config.DefaultSeed,
    'ci_level': 0.95,
    'ci_method': 'bootstrap',
    'weight_scheme': 'standard',
    'effect_scale': 'conditional',
    'n_workers': global_config.DefaultNWorkers,
    'max_failed_fraction': 0.1,
    'histogram_bins': 20,
}


def default_config_path(kind):
    """ Path of the shipped key=value file with the defaults of kind """
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data', kind + '.cfg')


def read_key_value(path):
    """ Parse a flat key=value file. Blank lines and lines starting with '#'
    are ignored, trailing comments are stripped.
    """
    content = {}
    with open(path, 'r') as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ConfigError('{}:{}: expected key=value, got "{}"'.format(path, lineno, line))
            key, value = line.split('=', 1)
            content[key.strip()] = value.strip()
    return content


def _literal(value):
    """ int or float when value reads as one, the string otherwise """
    for kind in (int, float):
        try:
            return kind(value)
        except ValueError:
            pass
    return value


def _shipped_defaults(kind):
    """ Defaults of kind as written in data/<kind>.cfg """
    return {key: _literal(value) for key, value in read_key_value(default_config_path(kind)).items()}


default_config_event_model = _shipped_defaults('event_model')
default_config_synth = _shipped_defaults('synth')

defaults = {'pipeline': default_config_pipeline,
            'event_model': default_config_event_model,
            'synth': default_config_synth}


def write_key_value(mapping, path):
    with open(path, 'w') as handle:
        for key, value in mapping.items():
            if isinstance(value, (tuple, list)):
                value = ','.join(str(v) for v in value)
            handle.write('{}={}\n'.format(key, value))


def coerce(key, value, default):
    """ Convert value to the type of default """
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                if value.lower() in ('1', 'true', 'yes', 'on'):
                    return True
                if value.lower() in ('0', 'false', 'no', 'off'):
                    return False
                raise ValueError(value)
            return bool(value)
        if isinstance(default, int):
            number = float(value) if isinstance(value, str) else value
            if isinstance(number, float) and not number.is_integer():
                raise ValueError(value)
            return int(number)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, tuple):
            if isinstance(value, str):
                value = [v.strip() for v in value.split(',') if v.strip()]
            return tuple(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError('Invalid value for "{}": {!r}'.format(key, value), key=key)


class ConfigFile(MutableMapping):
    """ Configuration of one kind ('pipeline', 'event_model' or 'synth').
    Defaults are loaded first and overridden by the user content, which
    may be a Mapping, a flat key=value file or a .json file.
    """
    def __init__(self, content=None, kind='pipeline'):

        if kind not in defaults:
            raise ConfigError('Unknown config kind "{}"'.format(kind))
        self.kind = kind
        if content is None:
            content = {}
        elif isinstance(content, str):
            if content.endswith('.json'):
                with open(content, 'r') as handle:
                    content = json.load(handle)
            else:
                content = read_key_value(content)

        if not isinstance(content, Mapping):
            raise TypeError('content has to be Mapping')

        self._dict = deepcopy(defaults[kind])
        for key, value in content.items():
            if key not in self._dict:
                raise ConfigError('Unknown {} config key "{}"'.format(kind, key), key=key)
            self._dict[key] = coerce(key, value, defaults[kind][key])

    def get_hash(self, exclude=()):
        """ md5 of the configuration without the keys in exclude """
        content = {key: value for key, value in self._dict.items() if key not in exclude}
        return hashlib.md5(json.dumps(content, sort_keys=True).encode()).hexdigest()

    def __getitem__(self, key):
        return self._dict[key]

    def __setitem__(self, key, item):
        if key not in defaults[self.kind]:
            raise ConfigError('Unknown {} config key "{}"'.format(self.kind, key), key=key)
        self._dict[key] = coerce(key, item, defaults[self.kind][key])

    def __delitem__(self, key):
        self._dict[key] = deepcopy(defaults[self.kind][key])

    def __iter__(self):
        return iter(self._dict)

    def __len__(self):
        return len(self._dict)

    def __repr__(self):
        return json.dumps(self._dict, indent=4)

    def __str__(self):
        return self.__repr__()
