import logging
import os

import pandas as pd

from ..causal import PipelineConfig, estimate_effects
from ..cohort import read_cohort_csv, summarize_cohort
from ..formatter import write_report
from ..utils import RunManifest, resolve_seed

logger = logging.getLogger(__name__)

__all__ = ['estimate_driver']


def _bootstrap_frame(boot):
    return pd.DataFrame([{
        'replicates': boot.n_replicates,
        'failed': boot.n_failed,
        'failed_fraction': boot.failed_fraction,
        'se_log_or': boot.se,
        'ci_lo': boot.interval[0],
        'ci_hi': boot.interval[1],
        'valid': int(boot.valid)
    }])


def estimate_driver(cohort, config=None, trim=None, boot=None, seed=None, workers=None, out='.'):
    """ Crude and IPW odds ratios for a cohort CSV

    Flags override the configuration file. boot=0 switches to Wald intervals only.

    Writes effects.txt/.csv, propensity_histogram.txt/.csv and manifest.json to out.
    """
    overrides = {}
    if trim is not None:
        overrides['trim_lo'], overrides['trim_hi'] = trim
    if boot is not None:
        if boot == 0:
            overrides['ci_method'] = 'wald'
        else:
            overrides['bootstrap_replicates'] = boot
    if workers is not None:
        overrides['n_workers'] = workers
    pipeline_config = PipelineConfig(config, **overrides)
    pipeline_config['seed'] = resolve_seed(seed, default=pipeline_config['seed'])

    frame = read_cohort_csv(cohort)
    logger.info('Estimating effects on %d records from %s', len(frame), cohort)
    result = estimate_effects(frame, pipeline_config)

    # n_workers does not change any result
    manifest = RunManifest('estimate', pipeline_config['seed'],
                           config={k: v for k, v in pipeline_config.items() if k != 'n_workers'},
                           config_hash=pipeline_config.get_hash(exclude=('n_workers', )))
    manifest.add_input(cohort)
    if isinstance(config, str):
        manifest.add_input(config)

    summary = summarize_cohort(frame)
    frames = {
        'Bunt vs swing away': summary.covariate_table(),
        'Odds ratio for winning, bunt vs swing away': result.effects_frame(),
        'Covariate balance (standardized mean differences)': result.balance.frame(),
        'Effective sample size': result.balance.ess_frame(),
        'Propensity model': result.propensity_model.summary(pipeline_config['ci_level']),
        'Weighted outcome model': result.ipw.model.summary(pipeline_config['ci_level'])
    }
    if result.bootstrap is not None:
        frames['Bootstrap'] = _bootstrap_frame(result.bootstrap)

    write_report(frames, out, 'effects', manifest, echo=True)
    write_report({'Propensity scores by arm': result.histogram}, out, 'propensity_histogram', manifest)
    manifest.save(os.path.join(out, 'manifest.json'))
    return result
