#!/usr/bin/env python
# hybtrot/analysis/report.py - Result files
# Copyright 2026 the hybtrot authors
#
# This library is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this library.  If not, see <http://www.gnu.org/licenses/>.
"""
Plot-ready CSV files and the ``key = value`` metadata record written next to
them. Reals are written with 17 significant digits, so a replayed run can be
compared byte for byte.
"""

from __future__ import absolute_import

import csv
import hashlib
import io
import logging
import os
from typing import (
    Any, Dict, Iterable, List, Mapping, Sequence, Text, TextIO, Union)

from hybtrot.analysis.ensemble import EnsembleStats
from hybtrot.common import ValidationError, format_real

__all__ = [
    'ENSEMBLE_COLUMNS',
    'METADATA_FILE',
    'write_ensemble_csv',
    'write_table',
    'write_table_csv',
    'read_table_csv',
    'write_metadata',
    'read_metadata',
    'file_digest',
]

logger = logging.getLogger(__name__)

ENSEMBLE_COLUMNS = (
    'time', 'mse', 'mse_stderr', 'fidelity_err', 'bias_sq', 'gate_count')

METADATA_FILE = 'metadata.txt'

PathLike = Union[Text, os.PathLike]


def format_value(value: Any) -> Text:
    """Formats a cell or metadata value."""
    if value is None:
        return 'none'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_real(value)
    return str(value)


def write_table(f: TextIO, columns: Sequence[Text],
                rows: Iterable[Sequence[Any]]) -> None:
    """Writes a header row and data rows to an open text stream."""
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValidationError(
                f'Row has {len(row)} cells, expected {len(columns)}')
        writer.writerow([format_value(v) for v in row])


def write_table_csv(path: PathLike, columns: Sequence[Text],
                    rows: Iterable[Sequence[Any]]) -> None:
    with io.open(path, 'w', encoding='utf-8', newline='') as f:
        write_table(f, columns, rows)
    logger.debug('wrote %s', path)


def write_ensemble_csv(path: PathLike, stats: EnsembleStats) -> None:
    write_table_csv(path, ENSEMBLE_COLUMNS, stats.rows())


def read_table_csv(path: PathLike) -> List[Dict[Text, Text]]:
    with io.open(path, 'r', encoding='utf-8', newline='') as f:
        return list(csv.DictReader(f))


def write_metadata(path: PathLike, items: Mapping[Text, Any]) -> None:
    """Writes one ``key = value`` line per item, in mapping order."""
    with io.open(path, 'w', encoding='utf-8') as f:
        for key, value in items.items():
            if '=' in key or '\n' in key:
                raise ValidationError(f'Invalid metadata key {key!r}')
            text = format_value(value)
            if '\n' in text:
                raise ValidationError(f'Metadata value for {key} has a '
                                      f'line break')
            f.write(f'{key} = {text}\n')


def read_metadata(path: PathLike) -> Dict[Text, Text]:
    """
    :raises ValidationError: On a line without ``=``.
    """
    out = {}
    with io.open(path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, 1):
            line = line.rstrip('\n')
            if not line.strip() or line.startswith('#'):
                continue
            key, sep, value = line.partition(' = ')
            if not sep:
                raise ValidationError(
                    f'{path}:{line_number}: expected "key = value"')
            out[key.strip()] = value
    return out


def file_digest(path: PathLike) -> Text:
    """sha256 of a file, hex encoded."""
    h = hashlib.sha256()
    with io.open(path, 'rb') as f:
        for block in iter(lambda: f.read(65536), b''):
            h.update(block)
    return h.hexdigest()
