import logging
import os

import numpy as np
import pandas as pd

from ..exceptions import PipelineError
from ..formatter import write_report
from ..synth import (SynthSpec, generate_frame, recovery_config, recovery_experiment, recovery_replicate,
                     true_marginal_or, unconfounded)
from ..synth.oracle import DefaultPopulation
from ..utils import RunManifest, resolve_seed

logger = logging.getLogger(__name__)

__all__ = ['synth_validate_driver', 'check_invariants']

RecoveryFraction = 0.95
PositivityFraction = 0.99
NullTolerance = 0.05


def _check(name, value, threshold, passed):
    return {'invariant': name, 'value': value, 'threshold': threshold, 'result': 'PASS' if passed else 'FAIL'}


def check_invariants(spec, n, reps, seed, null_n, n_population=DefaultPopulation, n_workers=1):
    """ Run the oracle checks for spec

    Returns
    -------
    (invariants DataFrame with a PASS/FAIL result per row, per-repetition recovery DataFrame)
    """
    rows = []

    frame = generate_frame(spec, n, seed=seed)
    consistent = bool(np.all(frame['Y'] == frame['A'] * frame['y1'] + (1 - frame['A']) * frame['y0']))
    rows.append(_check('consistency_identity', int(consistent), 1, consistent))

    inside = float(np.mean((frame['true_propensity'] > 0.01) & (frame['true_propensity'] < 0.99)))
    rows.append(_check('positivity_fraction', inside, PositivityFraction, inside >= PositivityFraction))

    truth = true_marginal_or(spec, n_population, seed)
    second = true_marginal_or(spec, n_population, seed + 1)
    combined = 3 * np.hypot(truth.se_log_or, second.se_log_or)
    gap = abs(truth.log_or - second.log_or)
    rows.append(_check('oracle_seed_agreement', gap, combined, gap <= combined))

    recovery = recovery_experiment(spec, n, reps, seed, truth=truth, n_workers=n_workers)
    finite = recovery.dropna(subset=['crude_log_or', 'ipw_log_or'])
    closer = float(finite['ipw_closer'].mean()) if len(finite) else 0.0
    rows.append(_check('ipw_closer_than_crude', closer, RecoveryFraction,
                       len(finite) == reps and closer >= RecoveryFraction))

    conditional = finite['ipw_conditional_log_or']
    tolerance = 4 * conditional.std(ddof=1) / np.sqrt(len(conditional)) if len(conditional) > 1 else np.inf
    bias = abs(conditional.mean() - spec.beta_treatment)
    rows.append(_check('conditional_recovers_beta_treatment', bias, tolerance, bias <= tolerance))

    null = recovery_replicate(0, unconfounded(spec), null_n, seed, recovery_config())
    null_gap = abs(null['ipw_log_or'] - null['crude_log_or'])
    rows.append(_check('no_confounding_crude_equals_ipw', null_gap, NullTolerance, null_gap < NullTolerance))

    return pd.DataFrame(rows), recovery


def synth_validate_driver(spec=None, n=10000, reps=200, null_n=50000, population=DefaultPopulation, seed=None,
                          workers=1, out='.'):
    """ Estimator-recovery experiment against the brute-force oracle

    Raises PipelineError when any invariant fails, after the reports are written.
    """
    synth_spec = SynthSpec.from_config(spec)
    seed = resolve_seed(seed, default=synth_spec.seed)

    manifest = RunManifest('synth-validate', seed, config=dict(synth_spec.to_config(), n=n, reps=reps,
                                                                null_n=null_n, population=population),
                           config_hash=synth_spec.to_config().get_hash())
    if isinstance(spec, str):
        manifest.add_input(spec)

    invariants, recovery = check_invariants(synth_spec, n, reps, seed, null_n, population, workers)
    overview = pd.DataFrame([{
        'true_marginal_or': float(np.exp(recovery['true_log_or'].iloc[0])) if len(recovery) else np.nan,
        'exp_beta_treatment': float(np.exp(synth_spec.beta_treatment)),
        'mean_crude_or': float(np.exp(recovery['crude_log_or'].mean())),
        'mean_ipw_marginal_or': float(np.exp(recovery['ipw_log_or'].mean())),
        'mean_ipw_conditional_or': float(np.exp(recovery['ipw_conditional_log_or'].mean()))
    }])

    write_report({'Oracle and estimators': overview, 'Invariants': invariants}, out, 'synth_validation', manifest,
                 echo=True)
    write_report(recovery, out, 'synth_recovery', manifest)
    manifest.save(os.path.join(out, 'manifest.json'))

    failed = invariants.loc[invariants['result'] == 'FAIL', 'invariant'].tolist()
    if failed:
        raise PipelineError('Synthetic validation failed: {}'.format(', '.join(failed)))
    return invariants, recovery
