"""
Report files written by the laboratory commands
"""
import json
import logging
from fractions import Fraction
from pathlib import Path

import numpy as np


logger = logging.getLogger(__name__)


def _plain(value):
    """JSON fallback for numpy scalars, arrays, fractions and enums"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if hasattr(value, 'value'):
        return value.value
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def plain_json(payload):
    """payload with numpy and exact values replaced by JSON types"""
    return json.loads(json.dumps(payload, default=_plain))


def format_cell(value):
    """Deterministic CSV text; floats use the shortest round-trip repr"""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


class ReportWriter:
    """Writes JSON summaries and CSV traces under one output directory"""

    def __init__(self, output_dir):
        self.output_dir = Path(output_dir)

    def _path(self, name):
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def write_json(self, name, payload):
        path = self._path(name)
        text = json.dumps(payload, indent=2, sort_keys=True, default=_plain)
        path.write_text(text + '\n')
        logger.info('Wrote %s', path)
        return path

    def write_csv(self, name, header, rows):
        cells = []
        for count, row in enumerate(rows):
            if len(row) != len(header):
                raise ValueError(
                    f'Row {count} has {len(row)} cells, '
                    f'header has {len(header)}'
                )
            cells.append([format_cell(value) for value in row])
        table = np.array(cells, dtype=str).reshape(len(cells), len(header))
        path = self._path(name)
        np.savetxt(path, table, fmt='%s', delimiter=',', newline='\n',
                   header=','.join(header), comments='')
        logger.info('Wrote %s (%d rows)', path, len(cells))
        return path
