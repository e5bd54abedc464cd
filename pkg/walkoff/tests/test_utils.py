"""
Configuration files, run manifests, report formatting, the parallel map and base-out states
"""
import json

import pandas as pd
import pytest

import walkoff as wo
from walkoff.base import BaseOutState, live_states
from walkoff.exceptions import ConfigError
from walkoff.formatter import to_text, write_report
from walkoff.utils import (ConfigFile, RunManifest, default_config_path, distributed_map, file_digest,
                           read_key_value, resolve_seed)


def square(x):
    return x * x


@pytest.mark.fast
@pytest.mark.parametrize('kind', ['pipeline', 'event_model', 'synth'])
def test_shipped_config_matches_defaults(kind):
    assert dict(ConfigFile(default_config_path(kind), kind=kind)) == dict(ConfigFile(kind=kind))


@pytest.mark.fast
def test_dataclass_defaults_come_from_shipped_config():
    from walkoff.simulator import EventModel
    from walkoff.synth import SynthSpec
    assert EventModel() == EventModel.from_config(default_config_path('event_model'))
    assert SynthSpec() == SynthSpec.from_config(default_config_path('synth'))
    assert isinstance(EventModel().p_sac_success, float)
    assert isinstance(SynthSpec().alpha_era, float)
    assert isinstance(SynthSpec().seed, int)
    assert EventModel().sac_fail_mode == 'batter_out'


@pytest.mark.fast
def test_config_file(tmp_path):
    config = ConfigFile({'trim_lo': '0.2', 'bootstrap_replicates': '500'})
    assert config['trim_lo'] == 0.2
    assert config['bootstrap_replicates'] == 500
    del config['trim_lo']
    assert config['trim_lo'] == 0.1
    assert len(config) == len(ConfigFile())

    path = str(tmp_path / 'config.json')
    with open(path, 'w') as handle:
        json.dump({'ci_level': 0.9}, handle)
    assert ConfigFile(path)['ci_level'] == 0.9
    assert ConfigFile(path).get_hash() != ConfigFile().get_hash()
    workers = ConfigFile({'n_workers': 4})
    assert workers.get_hash() != ConfigFile().get_hash()
    assert workers.get_hash(exclude=('n_workers', )) == ConfigFile().get_hash(exclude=('n_workers', ))

    with pytest.raises(ConfigError):
        ConfigFile({'bootstrap_replicates': '2.5'})
    with pytest.raises(ConfigError):
        ConfigFile(kind='hyper')
    with pytest.raises(TypeError):
        ConfigFile(['trim_lo'])


@pytest.mark.fast
def test_read_key_value(tmp_path):
    path = str(tmp_path / 'values.cfg')
    with open(path, 'w') as handle:
        handle.write('# comment\n\n a = 1 # trailing\nb=x=y\n')
    assert read_key_value(path) == {'a': '1', 'b': 'x=y'}
    with open(path, 'a') as handle:
        handle.write('no separator\n')
    with pytest.raises(ConfigError) as excinfo:
        read_key_value(path)
    assert ':5:' in str(excinfo.value)


@pytest.mark.fast
def test_seed_precedence(monkeypatch):
    monkeypatch.delenv('WALKOFF_SEED', raising=False)
    assert resolve_seed() == wo.config.DefaultSeed
    assert resolve_seed(default=5) == 5
    monkeypatch.setenv('WALKOFF_SEED', '9')
    assert resolve_seed(default=5) == 9
    assert resolve_seed(3, default=5) == 3
    monkeypatch.setenv('WALKOFF_SEED', 'nine')
    with pytest.raises(ConfigError) as excinfo:
        resolve_seed()
    assert excinfo.value.key == 'seed'


@pytest.mark.fast
def test_manifest(tmp_path):
    data = tmp_path / 'input.csv'
    data.write_text('a,b\n1,2\n')
    manifest = RunManifest('estimate', 7, config={'trim_lo': 0.1, 'covariates': ('ops', 'era')})
    manifest.add_input(str(data))
    header = manifest.header()
    assert header.splitlines()[:2] == ['# walkoff {} estimate'.format(wo.__version__), '# seed: 7']
    assert '# input input.csv: sha256 {}'.format(file_digest(str(data))) in header
    assert header == RunManifest('estimate', 7, config={'covariates': ('ops', 'era'), 'trim_lo': 0.1},
                                 inputs=dict(manifest.inputs)).header()
    assert 'config hash' not in header

    config = ConfigFile({'trim_lo': 0.2})
    hashed = RunManifest('estimate', 7, config=dict(config), config_hash=config.get_hash())
    assert '# config hash: md5 {}'.format(config.get_hash()) in hashed.header()

    path = str(tmp_path / 'manifest.json')
    manifest.save(path)
    with open(path) as handle:
        saved = json.load(handle)
    assert saved['config']['covariates'] == ['ops', 'era']
    assert saved['duration'] >= 0


@pytest.mark.fast
def test_write_report(tmp_path, capsys):
    first = pd.DataFrame({'arm': ['bunt', 'swing'], 'n': [53, 196]})
    second = pd.DataFrame({'method': ['crude'], 'odds_ratio': [2.1332]})
    manifest = RunManifest('estimate', 1)
    text_path, csv_path = write_report({'Arms': first, 'Effects': second}, str(tmp_path / 'out'), 'effects', manifest,
                                       echo=True)
    with open(text_path) as handle:
        text = handle.read()
    assert text.startswith(manifest.header())
    assert 'Arms\n----\n' in text
    assert '| bunt' in text
    assert text in capsys.readouterr().out

    csv = pd.read_csv(csv_path)
    assert list(csv['section']) == ['Arms', 'Arms', 'Effects']

    write_report(first, str(tmp_path), 'single')
    assert list(pd.read_csv(str(tmp_path / 'single.csv')).columns) == ['arm', 'n']
    assert to_text(first).count('\n') == 4


@pytest.mark.fast
def test_distributed_map_serial():
    assert distributed_map(square, range(5)) == [0, 1, 4, 9, 16]


@pytest.mark.distributed
def test_distributed_map_keeps_order():
    assert distributed_map(square, range(20), n_workers=2) == [x * x for x in range(20)]


@pytest.mark.fast
def test_base_out_states():
    states = live_states()
    assert len(states) == 24
    assert [s.index for s in states] == list(range(24))
    assert BaseOutState.from_index(10) == BaseOutState(second=True, outs=1)
    assert BaseOutState(first=True, third=True, outs=2).label() == '1_3:2'
    with pytest.raises(ValueError):
        BaseOutState(outs=3).index
    with pytest.raises(ValueError):
        BaseOutState.from_index(24)


@pytest.mark.fast
def test_weight_scheme_registry():
    from walkoff.causal.propensity import StandardWeights, WeightSchemeRegistry
    assert WeightSchemeRegistry.names() == ['standard', 'treated_inverse']
    assert WeightSchemeRegistry.lookup('standard') is StandardWeights
    with pytest.raises(ConfigError) as excinfo:
        WeightSchemeRegistry.lookup('overlap')
    assert excinfo.value.key == 'weight_scheme'
    assert 'standard, treated_inverse' in str(excinfo.value)
