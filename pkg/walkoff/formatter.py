"""
formatter.py
Every report is emitted twice: an aligned text table for reading and a CSV for diffing.
"""
import os

import pandas as pd
from tabulate import tabulate

FloatFormat = '.6g'
CsvFloatFormat = '%.10g'


def to_text(frame, title=None, floatfmt=FloatFormat):
    """ Render a DataFrame as a pipe table, optionally under a title line """
    table = tabulate(frame, tablefmt='pipe', headers='keys', showindex=False, floatfmt=floatfmt)
    if title:
        table = '{}\n{}\n\n{}'.format(title, '-' * len(title), table)
    return table + '\n'


def to_csv(frame):
    return frame.to_csv(index=False, float_format=CsvFloatFormat, lineterminator='\n')


def write_report(frames, dest, name, manifest=None, echo=False):
    """ Write one report as <dest>/<name>.txt and <dest>/<name>.csv

    Parameters
    ----------
    frames: pandas.DataFrame or dict of {title: DataFrame}
        Several frames end up as sections of the text report; the CSV holds
        their concatenation with a 'section' column.
    manifest: RunManifest, optional
        Its header is prepended to the text report
    echo: bool
        Also print the text report to stdout

    Returns
    -------
    (text_path, csv_path)
    """
    if isinstance(frames, pd.DataFrame):
        frames = {None: frames}

    os.makedirs(dest, exist_ok=True)
    text = manifest.header() + '\n' if manifest is not None else ''
    text += '\n'.join(to_text(frame, title) for title, frame in frames.items())

    if len(frames) == 1:
        csv_frame = next(iter(frames.values()))
    else:
        csv_frame = pd.concat([frame.assign(section=title) for title, frame in frames.items()], ignore_index=True)

    text_path = os.path.join(dest, name + '.txt')
    csv_path = os.path.join(dest, name + '.csv')
    with open(text_path, 'w') as handle:
        handle.write(text)
    with open(csv_path, 'w') as handle:
        handle.write(to_csv(csv_frame))
    if echo:
        print(text)
    return text_path, csv_path
