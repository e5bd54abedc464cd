"""
manifest.py
RunManifest: everything needed to verify a rerun of a command.
"""
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

from walkoff import config as global_config
from walkoff.exceptions import ConfigError


def file_digest(path, block_size=1 << 16):
    sha = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(block_size), b''):
            sha.update(block)
    return sha.hexdigest()


def resolve_seed(seed=None, default=None):
    """ --seed flag, else $WALKOFF_SEED, else default (a config file value), else the package default """
    if seed is not None:
        return int(seed)
    env = os.environ.get(global_config.SeedEnvVar, '')
    if env.strip():
        try:
            return int(env)
        except ValueError:
            raise ConfigError('$' + global_config.SeedEnvVar + ' must be an integer, got ' + repr(env), key='seed')
    if default is not None:
        return int(default)
    return global_config.DefaultSeed


@dataclass
class RunManifest:
    command: str
    seed: int
    config: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    config_hash: str = ''
    version: str = ''
    duration: float = None
    _started: float = field(default_factory=time.perf_counter, repr=False)

    def __post_init__(self):
        if not self.version:
            from walkoff import __version__
            self.version = __version__

    def add_input(self, path):
        self.inputs[os.path.basename(path)] = file_digest(path)

    def stop(self):
        self.duration = time.perf_counter() - self._started
        return self.duration

    def header(self):
        """ Deterministic text block embedded in reports (no wall-clock time) """
        lines = ['# walkoff {} {}'.format(self.version, self.command), '# seed: {}'.format(self.seed)]
        for key in sorted(self.config):
            lines.append('# config {}: {}'.format(key, self.config[key]))
        if self.config_hash:
            lines.append('# config hash: md5 {}'.format(self.config_hash))
        for name in sorted(self.inputs):
            lines.append('# input {}: sha256 {}'.format(name, self.inputs[name]))
        return '\n'.join(lines) + '\n'

    def to_dict(self):
        return {
            'command': self.command,
            'seed': self.seed,
            'config': {key: (list(val) if isinstance(val, tuple) else val) for key, val in self.config.items()},
            'inputs': dict(self.inputs),
            'config_hash': self.config_hash,
            'version': self.version,
            'duration': self.duration,
        }

    def save(self, path):
        if self.duration is None:
            self.stop()
        with open(path, 'w') as handle:
            handle.write(json.dumps(self.to_dict(), indent=4, sort_keys=True))
