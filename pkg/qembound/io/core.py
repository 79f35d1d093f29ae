"""Shared functionality for result file I/O. Internal.

Numbers are written with 17 significant digits (enough to restore every
double exactly) and non-finite values as ``inf``, ``-inf`` and ``nan``;
missing values are empty fields.
"""

import csv
import io
import math
import typing
from typing import Any, Callable, Iterable, Optional, Sequence, TextIO, Tuple, TypeVar, Union

import numpy as np

from qembound.numkit import QEMError

FilePayload = TypeVar('FilePayload')

Cell = Union[None, bool, int, float, str]


class ParseError(QEMError):
    """An input that is invalid according to the given format was detected."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        if line_no is not None:
            message = f'line {line_no}: {message}'
        super().__init__(message)
        self.line_no = line_no


def format_number(value: Cell) -> str:
    if value is None:
        return ''
    elif isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    elif isinstance(value, (int, np.integer)):
        return str(int(value))
    elif isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        elif math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return format(value, '.17g')
    return str(value)


def parse_number(field: str) -> Cell:
    """Inverse of :func:`format_number` for numeric and empty fields;
    other text is returned unchanged."""
    if field == '':
        return None
    elif field in ('true', 'false'):
        return field == 'true'
    try:
        return int(field)
    except ValueError:
        pass
    try:
        return float(field)
    except ValueError:
        return field


def csv_line(cells: Sequence[Cell]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator='').writerow(
        [format_number(cell) for cell in cells]
    )
    return buffer.getvalue()


def loaders(line_loader: Callable[..., FilePayload]
            ) -> Tuple[Callable[..., FilePayload], Callable[..., FilePayload]]:
    """Create load() and loads() functions from an iterating function."""
    return_annot = typing.get_type_hints(line_loader).get('return')
    if return_annot is None:
        return_annot = Any

    def load(file: TextIO, **kwargs) -> return_annot:
        return line_loader(file, **kwargs)

    def loads(text: str, **kwargs) -> return_annot:
        return line_loader(iter(text.split('\n')), **kwargs)

    return load, loads


def dumpers(line_dumper: Callable[..., Iterable[str]]
            ) -> Tuple[Callable[..., None], Callable[..., str]]:
    """Create dump() and dumps() functions from a line generator function."""

    def dump(file: TextIO, *args, **kwargs) -> None:
        for line in line_dumper(*args, **kwargs):
            file.write(line.rstrip('\n') + '\n')

    def dumps(*args, **kwargs) -> str:
        return ''.join(
            line.rstrip('\n') + '\n' for line in line_dumper(*args, **kwargs)
        )

    return dump, dumps
