#!/usr/bin/env python
# test_report.py - Tests for CSV and metadata output
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

from __future__ import absolute_import

import io
import os
import tempfile
import unittest

from hybtrot.analysis.report import (
    file_digest, format_value, read_metadata, read_table_csv, write_metadata,
    write_table, write_table_csv)
from hybtrot.common import ValidationError


class ReportTest(unittest.TestCase):

    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def test_format_value(self):
        self.assertEqual('none', format_value(None))
        self.assertEqual('true', format_value(True))
        self.assertEqual('3', format_value(3))
        self.assertEqual('0.5', format_value(0.5))
        self.assertEqual('0.10000000000000001', format_value(0.1))

    def test_write_table(self):
        f = io.StringIO()
        write_table(f, ('a', 'b', 'c'), [(1, 0.25, None), (2, 2.5, 'x y')])
        self.assertEqual('a,b,c\n1,0.25,none\n2,2.5,x y\n', f.getvalue())

    def test_row_length(self):
        with self.assertRaises(ValidationError):
            write_table(io.StringIO(), ('a', 'b'), [(1,)])

    def test_csv_file(self):
        path = os.path.join(self.dir, 't.csv')
        write_table_csv(path, ('time', 'mse'), [(0., 0.), (0.5, 1 / 3)])
        rows = read_table_csv(path)
        self.assertEqual(2, len(rows))
        self.assertEqual(1 / 3, float(rows[1]['mse']))
        with io.open(path, 'rb') as f:
            self.assertNotIn(b'\r', f.read())

    def test_metadata(self):
        path = os.path.join(self.dir, 'metadata.txt')
        write_metadata(path, {'argv': 'run --chain 3 --out "a b"',
                              'dt': 0.05, 'gamma_is_bound': False,
                              'gate_budget': None})
        meta = read_metadata(path)
        self.assertEqual(['argv', 'dt', 'gamma_is_bound', 'gate_budget'],
                         list(meta))
        self.assertEqual('run --chain 3 --out "a b"', meta['argv'])
        self.assertEqual(0.05, float(meta['dt']))
        self.assertEqual('false', meta['gamma_is_bound'])
        self.assertEqual('none', meta['gate_budget'])

    def test_metadata_rejects(self):
        path = os.path.join(self.dir, 'metadata.txt')
        with self.assertRaises(ValidationError):
            write_metadata(path, {'a=b': 1})
        with self.assertRaises(ValidationError):
            write_metadata(path, {'a': 'two\nlines'})

    def test_read_metadata_skips_comments(self):
        path = os.path.join(self.dir, 'metadata.txt')
        with io.open(path, 'w', encoding='utf-8') as f:
            f.write('# header\n\nkey = a = b\n')
        self.assertEqual({'key': 'a = b'}, read_metadata(path))
        with io.open(path, 'w', encoding='utf-8') as f:
            f.write('no separator\n')
        with self.assertRaises(ValidationError):
            read_metadata(path)

    def test_digest(self):
        path = os.path.join(self.dir, 'empty')
        io.open(path, 'wb').close()
        self.assertEqual(
            'e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855',
            file_digest(path))


if __name__ == '__main__':
    unittest.main()
