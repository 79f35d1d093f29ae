
import sys
import os
import io
import math

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))
import qembound.io.core
import qembound.io.records
from qembound.io.core import ParseError


RECORDS = [
    {'command': 'bound', 'value': .25856, 'flags': []},
    {'value': math.inf, 'witness': None, 'nested': {'b': 1, 'a': [1, 2]}},
]

TABLE = '''L,bound_thm4,n_hat,flags
1,0.5,12,
2,inf,,Unachievable
'''


def test_record_lines_sorted_keys():
    text = qembound.io.records.dumps_records(RECORDS)
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0] == '{"command": "bound", "flags": [], "value": 0.25856}'
    assert '"value": "inf"' in lines[1]


def test_records_reload():
    text = qembound.io.records.dumps_records(RECORDS)
    loaded = qembound.io.records.loads_records(text)
    assert loaded[0] == RECORDS[0]
    assert math.isinf(loaded[1]['value'])
    assert loaded[1]['nested'] == {'a': [1, 2], 'b': 1}


def test_record_matrix():
    line = qembound.io.records.record_line({'rho': np.diag([.5, .5])})
    assert '"type": "matrix"' in line


def test_dump_to_file():
    buffer = io.StringIO()
    qembound.io.records.dump_records(buffer, RECORDS[:1])
    assert buffer.getvalue().endswith('\n')
    assert qembound.io.records.load_records(
        io.StringIO(buffer.getvalue())
    ) == RECORDS[:1]


@pytest.mark.parametrize('text, line_no', [
    ('{"a": 1}\n{"a": \n', 2),
    ('[1, 2]\n', 1),
])
def test_records_invalid(text, line_no):
    with pytest.raises(ParseError) as err:
        qembound.io.records.loads_records(text)
    assert err.value.line_no == line_no


def test_table_dump():
    rows = [
        {'L': 1, 'bound_thm4': .5, 'n_hat': 12, 'flags': ''},
        {'L': 2, 'bound_thm4': math.inf, 'n_hat': None,
         'flags': 'Unachievable'},
    ]
    text = qembound.io.records.dumps_table(rows, ['L', 'bound_thm4', 'n_hat',
                                                  'flags'])
    assert text == TABLE


def test_table_load():
    rows = qembound.io.records.loads_table(TABLE)
    assert rows[0] == {'L': 1, 'bound_thm4': .5, 'n_hat': 12, 'flags': None}
    assert math.isinf(rows[1]['bound_thm4'])
    assert rows[1]['flags'] == 'Unachievable'


def test_table_ragged():
    with pytest.raises(ParseError):
        qembound.io.records.loads_table('a,b\n1\n')


@pytest.mark.parametrize('value, text', [
    (None, ''),
    (True, 'true'),
    (3, '3'),
    (.1, '0.10000000000000001'),
    (-math.inf, '-inf'),
    (math.nan, 'nan'),
    ('Diverges', 'Diverges'),
])
def test_format_number(value, text):
    assert qembound.io.core.format_number(value) == text


def test_full_precision():
    value = 1 / 3
    assert qembound.io.core.parse_number(
        qembound.io.core.format_number(value)
    ) == value
