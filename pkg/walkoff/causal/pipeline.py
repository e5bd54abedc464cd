"""
pipeline.py
End-to-end estimation: crude, propensity, trimming, weighting, IPW, bootstrap and balance
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional

import pandas as pd

from .balance import BalanceReport, balance_diagnostics, propensity_histogram
from .bootstrap import BootstrapResult, bootstrap_ci
from .effects import EffectEstimate, crude_or, ipw_effect
from .propensity import estimate_propensity, ipw_weights, trim

logger = logging.getLogger(__name__)

__all__ = ['EffectsResult', 'estimate_effects']


@dataclass
class EffectsResult:
    crude: EffectEstimate
    ipw: EffectEstimate
    ipw_bootstrap: Optional[EffectEstimate]
    bootstrap: Optional[BootstrapResult]
    balance: BalanceReport
    histogram: pd.DataFrame
    propensity_model: object
    weighted: pd.DataFrame

    @property
    def estimates(self):
        return [e for e in (self.crude, self.ipw, self.ipw_bootstrap) if e is not None]

    def effects_frame(self):
        return pd.DataFrame([e.row() for e in self.estimates],
                            columns=['method', 'odds_ratio', 'ci_lo', 'ci_hi', 'ci_method', 'n_used', 'n_trimmed'])


def estimate_effects(cohort, config):
    """ Run the full estimation on a cohort DataFrame

    The IPW estimate always carries its (labeled) Wald interval; with ci_method
    'bootstrap' a second IPW row with the percentile interval is added.
    """
    crude = crude_or(cohort, config['ci_level'])
    scored, propensity_model = estimate_propensity(cohort, config)
    kept, n_trimmed = trim(scored, config)
    weighted = ipw_weights(kept, config['weight_scheme'])
    ipw = ipw_effect(weighted, config, n_trimmed=n_trimmed)
    logger.info('Crude OR %.4f, IPW OR %.4f (%d used, %d trimmed)', crude.odds_ratio, ipw.odds_ratio, ipw.n_used,
                n_trimmed)

    boot = ipw_boot = None
    if config['ci_method'] == 'bootstrap':
        boot = bootstrap_ci(cohort, config)
        lo, hi = boot.interval
        if not lo <= ipw.odds_ratio <= hi:
            logger.warning('Point estimate %.4f outside the percentile interval (%.4f, %.4f); interval extended',
                           ipw.odds_ratio, lo, hi)
            lo, hi = min(lo, ipw.odds_ratio), max(hi, ipw.odds_ratio)
        ipw_boot = replace(ipw, se_log_or=boot.se, ci=(lo, hi), ci_method='bootstrap')

    return EffectsResult(crude=crude,
                         ipw=ipw,
                         ipw_bootstrap=ipw_boot,
                         bootstrap=boot,
                         balance=balance_diagnostics(weighted),
                         histogram=propensity_histogram(scored, config['histogram_bins']),
                         propensity_model=propensity_model,
                         weighted=weighted)
