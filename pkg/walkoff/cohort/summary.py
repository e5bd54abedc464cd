"""
summary.py
Descriptive comparison of bunters and nonbunters, and the pitch-sequence audit
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd

from ..constants import Covariates
from ..exceptions import PipelineError
from ..retrosheet import pitch_profile
from .extract import ResultCategory
from .io import cohort_frame

logger = logging.getLogger(__name__)

__all__ = [
    'GroupSummary', 'CohortSummary', 'summarize_cohort', 'ArmAudit', 'audit_strategy_switching', 'audit_frame'
]

ARM_LABELS = {1: 'bunt', 0: 'swing'}


@dataclass
class GroupSummary:
    n: int
    win_rate: float
    means: Dict[str, float]
    sds: Dict[str, float]
    category_pct: Dict[str, float]


@dataclass
class CohortSummary:
    n: int
    groups: Dict[int, Optional[GroupSummary]] = field(default_factory=dict)

    def covariate_table(self):
        """ Group sizes, win rates and covariate mean (sd) per arm """
        rows = []
        for arm in (1, 0):
            group = self.groups.get(arm)
            row = {'arm': ARM_LABELS[arm], 'A': arm}
            if group is None:
                row.update({'n': 0, 'win_rate': np.nan})
                row.update({'{}_{}'.format(c, stat): np.nan for c in Covariates for stat in ('mean', 'sd')})
            else:
                row.update({'n': group.n, 'win_rate': group.win_rate})
                for c in Covariates:
                    row['{}_mean'.format(c)] = group.means[c]
                    row['{}_sd'.format(c)] = group.sds[c]
            rows.append(row)
        return pd.DataFrame(rows)

    def category_table(self):
        """ Percentage of each result category per arm """
        rows = []
        for category in ResultCategory:
            row = {'result_category': category.value, 'favorable': int(category.favorable)}
            for arm in (1, 0):
                group = self.groups.get(arm)
                row['pct_{}'.format(ARM_LABELS[arm])] = np.nan if group is None else group.category_pct[category.value]
            rows.append(row)
        return pd.DataFrame(rows)


def _as_frame(records):
    if isinstance(records, pd.DataFrame):
        return records
    return cohort_frame(records)


def summarize_cohort(records):
    """ Per-arm size, win rate, covariate means and sample standard deviations and
    result-category percentages. An arm without records is reported as None.
    """
    frame = _as_frame(records)
    summary = CohortSummary(n=len(frame))
    for arm in (1, 0):
        group = frame[frame['A'] == arm]
        if group.empty:
            summary.groups[arm] = None
            continue
        counts = group['result_category'].value_counts()
        summary.groups[arm] = GroupSummary(
            n=len(group),
            win_rate=float(group['Y'].mean()),
            means={c: float(group[c].mean()) for c in Covariates},
            sds={c: float(group[c].std(ddof=1)) if len(group) > 1 else np.nan for c in Covariates},
            category_pct={cat.value: 100 * float(counts.get(cat.value, 0)) / len(group) for cat in ResultCategory})
    return summary


@dataclass
class ArmAudit:
    A: int
    sampled: int
    switched: int
    unknown: int

    @property
    def fraction(self):
        known = self.sampled - self.unknown
        return self.switched / known if known else np.nan


def audit_strategy_switching(records, n_per_group, seed):
    """ Sample n_per_group records from each arm and profile their pitch sequences

    Returns
    -------
    dict {A: ArmAudit}
    """
    rng = np.random.default_rng(seed)
    audits = {}
    for arm in (1, 0):
        group = [r for r in records if r.A == arm]
        if n_per_group > len(group):
            raise PipelineError('Cannot sample {} records from an arm of {}'.format(n_per_group, len(group)))
        chosen = np.sort(rng.choice(len(group), size=n_per_group, replace=False))
        profiles = [pitch_profile(group[i].pitches, bool(group[i].A)) for i in chosen]
        audits[arm] = ArmAudit(A=arm,
                               sampled=len(profiles),
                               switched=sum(p.switched_strategy for p in profiles if not p.unknown),
                               unknown=sum(p.unknown for p in profiles))
        logger.info('Audit %s: %d/%d switched (%d unknown)', ARM_LABELS[arm], audits[arm].switched,
                    audits[arm].sampled, audits[arm].unknown)
    return audits


def audit_frame(audits):
    return pd.DataFrame([{
        'arm': ARM_LABELS[a.A],
        'sampled': a.sampled,
        'switched': a.switched,
        'unknown': a.unknown,
        'fraction': a.fraction
    } for a in audits.values()])
