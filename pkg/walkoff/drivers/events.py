import logging
import os

import pandas as pd

from ..cohort import (audit_frame, audit_strategy_switching, extract_situations, join_covariates, summarize_cohort,
                      write_cohort_csv)
from ..exceptions import PipelineError
from ..formatter import write_report
from ..retrosheet import event_file_paths, read_event_file, replay_games, write_context_csv
from ..simulator import fit_geometric, observed_extra_innings
from ..stats import load_batting, load_people, load_pitching
from ..utils import RunManifest, resolve_seed

logger = logging.getLogger(__name__)

__all__ = ['parse_driver', 'cohort_driver', 'collect_event_files']


def collect_event_files(paths):
    """ Expand directories into their event files; plain files are kept as given """
    files = []
    for path in paths:
        if os.path.isdir(path):
            files.extend(event_file_paths(path))
        elif os.path.isfile(path):
            files.append(path)
        else:
            raise FileNotFoundError('No such file or directory: {}'.format(path))
    return files


def parse_driver(paths, out=None):
    """ Parse and replay event files, print a summary and optionally dump every PlayContext """
    games = []
    for path in collect_event_files(paths):
        games.extend(read_event_file(path))
    contexts, errors = replay_games(games)
    n_plays = sum(len(c) for c in contexts.values())

    print('{} games'.format(len(games)))
    print('{} plays replayed'.format(n_plays))
    print('{} replay inconsistencies'.format(len(errors)))
    for exc in errors:
        print('    {}'.format(exc))

    counts = observed_extra_innings(games)
    if counts:
        print('{} extra-inning games, fitted r = {:.4f}'.format(sum(counts.values()), fit_geometric(counts).r))

    if out:
        write_context_csv([c for game in contexts.values() for c in game], out)
        logger.info('Play contexts written to %s', out)
    return games, contexts, errors


def _extraction_frame(report):
    return pd.DataFrame([
        {'item': 'games_seen', 'count': report.games_seen},
        {'item': 'games_replayed', 'count': report.games_replayed},
        {'item': 'games_with_replay_errors', 'count': report.games_with_errors},
        {'item': 'games_outside_seasons', 'count': report.games_skipped_season},
        {'item': 'games_not_regular_season', 'count': report.games_skipped_nonregular},
        {'item': 'qualifying_halves', 'count': report.qualifying_halves},
    ])


def _join_frame(report):
    rows = [{'item': 'joined', 'count': report.joined}, {'item': 'excluded', 'count': report.excluded}]
    rows += [{'item': reason, 'count': report.reasons.get(reason, 0)}
             for reason in ('missing_batter', 'missing_pitcher', 'undefined_covariate')]
    return pd.DataFrame(rows)


def cohort_driver(events, batting, pitching, people=None, seasons=None, out='cohort.csv', audit=0, seed=None):
    """ Build the cohort CSV from event files and Lahman tables

    Writes <out>, cohort_summary.txt/.csv and manifest.json next to it and prints
    the summary.
    """
    if seasons:
        # validates the ghost-runner era before any file is read
        extract_situations([], seasons)
    seed = resolve_seed(seed)
    paths = event_file_paths(events)
    games = []
    for path in paths:
        games.extend(read_event_file(path))

    records, report = extract_situations(games, seasons, return_report=True)
    if not records:
        raise PipelineError('No qualifying situations (tied bottom halves of extra innings) in {} games of {}'.format(
            report.games_seen, events))

    people_map = load_people(people) if people else None
    joined, join_report = join_covariates(records, load_batting(batting), load_pitching(pitching), people_map)
    if not joined:
        raise PipelineError('None of the {} qualifying situations could be joined to season covariates {}'.format(
            len(records), dict(join_report.reasons)))

    write_cohort_csv(joined, out)
    logger.info('%d cohort records written to %s', len(joined), out)

    manifest = RunManifest('cohort', seed, config={'seasons': sorted(seasons) if seasons else 'all', 'audit': audit})
    for path in paths + [batting, pitching] + ([people] if people else []):
        manifest.add_input(path)

    summary = summarize_cohort(joined)
    frames = {
        'Bunt vs swing away': summary.covariate_table(),
        'Result of the first plate appearance (%)': summary.category_table(),
        'Extraction': _extraction_frame(report),
        'Covariate join': _join_frame(join_report)
    }
    if audit:
        frames['Pitch-sequence audit'] = audit_frame(audit_strategy_switching(joined, audit, seed))

    dest = os.path.dirname(os.path.abspath(out))
    write_report(frames, dest, 'cohort_summary', manifest, echo=True)
    manifest.save(os.path.join(dest, 'manifest.json'))
    return joined
