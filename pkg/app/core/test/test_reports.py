"""
Tests for report files
"""
import json
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from django.test import SimpleTestCase

from core.reports import ReportWriter, format_cell, plain_json
from skewprod.ergodicity import Verdict


class ReportWriterTests(SimpleTestCase):
    """Test JSON and CSV output"""

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.writer = ReportWriter(Path(directory.name) / 'nested')

    def test_json_sorted_and_plain(self):
        """Test numpy values and fractions are written as JSON types"""
        path = self.writer.write_json('summary.json', {
            'b': np.float64(0.5),
            'a': [np.int64(3), Fraction(1, 3)],
            'verdict': Verdict.DECAYING,
        })
        text = path.read_text()
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(json.loads(text),
                         {'a': [3, '1/3'], 'b': 0.5, 'verdict': 'decaying'})

    def test_csv_cells(self):
        """Test floats use repr and booleans are lower case"""
        path = self.writer.write_csv('trace.csv', ('n', 'value', 'ok'),
                                     [(1, 0.1, True), (2, 1 / 3, False)])
        self.assertEqual(path.read_text(),
                         'n,value,ok\n'
                         '1,0.1,true\n'
                         f'2,{1 / 3!r},false\n')

    def test_csv_row_length(self):
        with self.assertRaises(ValueError):
            self.writer.write_csv('bad.csv', ('a', 'b'), [(1,)])
        self.assertFalse((self.writer.output_dir / 'bad.csv').exists())

    def test_csv_header_only(self):
        path = self.writer.write_csv('empty.csv', ('n', 'value'), [])
        self.assertEqual(path.read_text(), 'n,value\n')

    def test_csv_numpy_rows(self):
        """Test rows of a numpy trace keep full precision"""
        trace = np.array([[1.0, np.pi], [2.0, np.e]])
        path = self.writer.write_csv('trace.csv', ('n', 'value'), trace)
        self.assertEqual(path.read_text().splitlines()[1],
                         f'1.0,{np.pi!r}')

    def test_format_cell(self):
        self.assertEqual(format_cell(np.float64(2.5)), '2.5')
        self.assertEqual(format_cell(np.int64(4)), '4')
        self.assertEqual(format_cell(1e-20), '1e-20')

    def test_plain_json(self):
        self.assertEqual(plain_json({'x': np.array([1.5, 2.0])}),
                         {'x': [1.5, 2.0]})
        with self.assertRaises(TypeError):
            plain_json({'x': object()})
