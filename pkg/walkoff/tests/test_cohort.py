"""
Cohort extraction, covariate join, cohort CSV and descriptive summaries
"""
import os

import pandas as pd
import pytest

from walkoff.cohort import (COHORT_COLUMNS, ResultCategory, audit_frame, audit_strategy_switching, cohort_frame,
                            extract_situations, join_covariates, read_cohort_csv, summarize_cohort, write_cohort_csv)
from walkoff.exceptions import PipelineError, SchemaError
from walkoff.retrosheet import read_event_directory
from walkoff.stats import load_batting, load_people, load_pitching

test_dir = os.path.dirname(os.path.abspath(__file__))
data_dir = os.path.join(test_dir, 'data')


@pytest.fixture(scope='module')
def extracted():
    games = read_event_directory(os.path.join(data_dir, 'events'))
    return extract_situations(games, return_report=True)


@pytest.fixture(scope='module')
def joined(extracted):
    records, _ = extracted
    batting = load_batting(os.path.join(data_dir, 'Batting.csv'))
    pitching = load_pitching(os.path.join(data_dir, 'Pitching.csv'))
    people = load_people(os.path.join(data_dir, 'People.csv'))
    return join_covariates(records, batting, pitching, people)


def keyed(records):
    return {(r.game_id, r.inning): r for r in records}


@pytest.mark.fast
def test_extraction_report(extracted):
    records, report = extracted
    assert report.games_seen == 15
    assert report.games_skipped_nonregular == 1
    assert report.games_replayed == 14
    assert report.games_with_errors == 0
    assert report.qualifying_halves == len(records) == 12
    assert sum(r.A for r in records) == 5


@pytest.mark.fast
@pytest.mark.parametrize(['game_id', 'inning', 'A', 'Y', 'category'], [
    ('HOM202104010', 10, 1, 1, ResultCategory.THIRD_ONE_OUT),
    ('HOM202104020', 10, 0, 1, ResultCategory.RUN_SCORES),
    ('HOM202104030', 10, 1, 0, ResultCategory.THIRD_ONE_OUT),
    ('HOM202104040', 10, 0, 0, ResultCategory.OTHER),
    ('HOM202104040', 11, 0, 1, ResultCategory.FIRST_AND_SECOND_NO_OUTS),
    ('HOM202104050', 10, 1, 1, ResultCategory.THIRD_ONE_OUT),
    ('HOM202104060', 10, 0, 1, ResultCategory.THIRD_ONE_OUT),
    ('HOM202205010', 10, 1, 0, ResultCategory.OTHER),
    ('HOM202205020', 10, 0, 1, ResultCategory.FIRST_AND_SECOND_NO_OUTS),
    ('HOM202205030', 10, 0, 1, ResultCategory.FIRST_AND_THIRD_NO_OUTS),
    ('HOM202205040', 10, 1, 1, ResultCategory.FIRST_AND_THIRD_NO_OUTS),
    ('HOM202205050', 10, 0, 1, ResultCategory.RUN_SCORES),
])
def test_qualifying_records(extracted, game_id, inning, A, Y, category):
    record = keyed(extracted[0])[(game_id, inning)]
    assert (record.A, record.Y, record.result_category) == (A, Y, category)


@pytest.mark.fast
def test_excluded_halves(extracted):
    records = keyed(extracted[0])
    # not tied after the visitors scored, a seven-inning game, a walk-off in the ninth, postseason
    for key in [('HOM202104030', 11), ('HOM202205010', 11), ('HOM202104090', 10), ('HOM202110050', 10)]:
        assert key not in records
    assert not any(r.game_id in ('HOM202104070', 'HOM202104080') for r in records.values())


@pytest.mark.fast
def test_record_details(extracted):
    records = keyed(extracted[0])
    relief = records[('HOM202104050', 10)]
    assert relief.batter_id == 'phit001'
    assert relief.pitcher_id == 'visp002'
    # a stolen base before the strikeout does not end the first plate appearance
    assert records[('HOM202104060', 10)].pitches == 'C.SS'
    assert records[('HOM202104010', 10)].covariates is None


@pytest.mark.fast
def test_season_restriction():
    games = read_event_directory(os.path.join(data_dir, 'events'))
    records = extract_situations(games, seasons=[2021])
    assert len(records) == 7
    assert {r.season for r in records} == {2021}
    with pytest.raises(PipelineError):
        extract_situations(games, seasons=[2019, 2021])


@pytest.mark.fast
def test_extraction_is_repeatable(extracted):
    games = read_event_directory(os.path.join(data_dir, 'events'))
    first, first_report = extract_situations(games, return_report=True)
    second, second_report = extract_situations(games, return_report=True)
    assert first == second
    assert first_report == second_report
    assert first == extracted[0]
    assert extract_situations(games[::-1]) == first


@pytest.mark.fast
def test_join(joined):
    records, report = joined
    assert report.joined == len(records) == 10
    assert report.reasons == {'missing_batter': 1, 'missing_pitcher': 1}
    assert report.excluded == 2
    first = keyed(records)[('HOM202104010', 10)]
    assert first.covariates.era == pytest.approx(3.5)
    assert first.covariates.sac_rate == pytest.approx(800 / 226)


@pytest.mark.fast
def test_join_without_people(extracted):
    records, _ = extracted
    batting = load_batting(os.path.join(data_dir, 'Batting.csv'))
    pitching = load_pitching(os.path.join(data_dir, 'Pitching.csv'))
    kept, report = join_covariates(records, batting, pitching)
    assert kept == []
    assert report.reasons['missing_batter'] == 12


@pytest.mark.fast
def test_cohort_csv(joined, tmp_path):
    records, _ = joined
    path = str(tmp_path / 'cohort.csv')
    write_cohort_csv(records, path)
    frame = read_cohort_csv(path)
    assert list(frame.columns) == COHORT_COLUMNS
    pd.testing.assert_frame_equal(frame, cohort_frame(records), check_dtype=False)


@pytest.mark.fast
def test_cohort_csv_validation(joined, tmp_path):
    frame = cohort_frame(joined[0])
    path = str(tmp_path / 'cohort.csv')

    frame.drop(columns=['era']).to_csv(path, index=False)
    with pytest.raises(SchemaError):
        read_cohort_csv(path)

    bad = frame.copy()
    bad.loc[0, 'result_category'] = 'GRAND_SLAM'
    bad.to_csv(path, index=False)
    with pytest.raises(PipelineError):
        read_cohort_csv(path)

    bad = frame.copy()
    bad.loc[0, 'Y'] = 2
    bad.to_csv(path, index=False)
    with pytest.raises(PipelineError):
        read_cohort_csv(path)

    bad = frame.copy()
    bad.loc[2, 'ops'] = None
    bad.to_csv(path, index=False)
    with pytest.raises(PipelineError) as excinfo:
        read_cohort_csv(path)
    assert 'ops' in str(excinfo.value) and 'line 4' in str(excinfo.value)

    bad = frame.copy()
    bad['era'] = bad['era'].astype(object)
    bad.loc[1, 'era'] = 'n/a'
    bad.to_csv(path, index=False)
    with pytest.raises(PipelineError) as excinfo:
        read_cohort_csv(path)
    assert 'era' in str(excinfo.value) and 'line 3' in str(excinfo.value)


@pytest.mark.fast
def test_summary(joined):
    summary = summarize_cohort(joined[0])
    bunt, swing = summary.groups[1], summary.groups[0]
    assert summary.n == 10
    assert (bunt.n, swing.n) == (5, 5)
    assert bunt.win_rate == pytest.approx(0.6)
    assert swing.win_rate == pytest.approx(0.8)
    assert bunt.category_pct['THIRD_ONE_OUT'] == pytest.approx(60)
    assert sum(swing.category_pct.values()) == pytest.approx(100)

    table = summary.covariate_table()
    assert list(table['arm']) == ['bunt', 'swing']
    categories = summary.category_table().set_index('result_category')
    assert categories.loc['OTHER', 'favorable'] == 0
    assert categories.loc['OTHER', 'pct_bunt'] == pytest.approx(20)


@pytest.mark.fast
def test_summary_empty_arm(joined):
    swing_only = [r for r in joined[0] if r.A == 0]
    summary = summarize_cohort(swing_only)
    assert summary.groups[1] is None
    assert summary.covariate_table().loc[0, 'n'] == 0


@pytest.mark.fast
def test_strategy_switching_audit(joined):
    audits = audit_strategy_switching(joined[0], 5, seed=7)
    assert (audits[1].switched, audits[1].unknown) == (0, 0)
    assert audits[1].fraction == 0
    assert (audits[0].switched, audits[0].unknown) == (1, 1)
    assert audits[0].fraction == pytest.approx(0.25)
    assert list(audit_frame(audits)['arm']) == ['bunt', 'swing']

    with pytest.raises(PipelineError):
        audit_strategy_switching(joined[0], 6, seed=7)
