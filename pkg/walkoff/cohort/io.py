"""
io.py
The cohort CSV: interchange format between the data and the estimation pipeline
"""
import numpy as np
import pandas as pd

from ..exceptions import PipelineError, SchemaError
from .extract import ResultCategory

__all__ = ['COHORT_COLUMNS', 'cohort_frame', 'write_cohort_csv', 'read_cohort_csv']

COHORT_COLUMNS = [
    'game_id', 'season', 'inning', 'batter_id', 'pitcher_id', 'A', 'Y', 'ops', 'sac_rate', 'era', 'result_category'
]


def cohort_frame(records):
    """ DataFrame in cohort-CSV layout from a list of CohortRecord """
    rows = []
    for r in records:
        covariates = r.covariates if r.covariates is not None else (np.nan, np.nan, np.nan)
        rows.append([
            r.game_id, r.season, r.inning, r.batter_id, r.pitcher_id, r.A, r.Y, covariates[0], covariates[1],
            covariates[2], r.result_category.value
        ])
    frame = pd.DataFrame(rows, columns=COHORT_COLUMNS)
    return frame.astype({'season': int, 'inning': int, 'A': int, 'Y': int, 'ops': float, 'sac_rate': float,
                         'era': float})


def write_cohort_csv(cohort, path):
    if not isinstance(cohort, pd.DataFrame):
        cohort = cohort_frame(cohort)
    cohort[COHORT_COLUMNS].to_csv(path, index=False, float_format='%.10g', lineterminator='\n')


def read_cohort_csv(path):
    frame = pd.read_csv(path, dtype={'game_id': str, 'batter_id': str, 'pitcher_id': str, 'result_category': str})
    for column in COHORT_COLUMNS:
        if column not in frame.columns:
            raise SchemaError(column, path)
    frame = frame[COHORT_COLUMNS].copy()
    for column in ('A', 'Y'):
        if not frame[column].isin([0, 1]).all():
            raise PipelineError('Column {} of {} must be 0/1'.format(column, path))
    known = {c.value for c in ResultCategory}
    unknown = set(frame['result_category']) - known
    if unknown:
        raise PipelineError('Unknown result categories in {}: {}'.format(path, sorted(unknown)))
    for column in ('ops', 'sac_rate', 'era'):
        values = pd.to_numeric(frame[column], errors='coerce').to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(values))
        if len(bad):
            # line 1 is the header
            raise PipelineError('{}: {} is missing or not a finite number on line {} ({} rows affected)'.format(
                path, column, bad[0] + 2, len(bad)))
        frame[column] = values
    return frame.astype({'A': int, 'Y': int})
