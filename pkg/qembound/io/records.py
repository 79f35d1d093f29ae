"""JSON lines records and CSV tables.

A result file in JSON lines format holds one record per line; each record
is serialized through :mod:`qembound.persist` (complex matrices as typed
dictionaries, non-finite floats as string literals) with sorted keys.

A CSV table has a header row followed by one row per dictionary, in the
given column order.
"""

import csv
import json
from typing import Any, Dict, Iterable, List, Sequence

from qembound import persist
from qembound.io import core
from qembound.io.core import ParseError


def record_line(record: Dict[str, Any]) -> str:
    return json.dumps(persist.serialize_value(record), sort_keys=True,
                      allow_nan=False)


def dump_record_lines(records: Iterable[Dict[str, Any]]) -> Iterable[str]:
    for record in records:
        yield record_line(record)


def load_record_lines(lines: Iterable[str]) -> List[Dict[str, Any]]:
    """Parse JSON lines, skipping blank ones; string float literals are
    decoded back to floats."""
    records = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise ParseError(f'invalid JSON: {err.msg}', line_no)
        if not isinstance(record, dict):
            raise ParseError('record is not an object', line_no)
        records.append(persist.deserialize_value(record))
    return records


dump_records, dumps_records = core.dumpers(dump_record_lines)
load_records, loads_records = core.loaders(load_record_lines)


def dump_table_lines(rows: Iterable[Dict[str, Any]],
                     columns: Sequence[str],
                     ) -> Iterable[str]:
    yield core.csv_line(columns)
    for row in rows:
        yield core.csv_line([row.get(column) for column in columns])


def load_table_lines(lines: Iterable[str]) -> List[Dict[str, Any]]:
    """Parse a CSV table into dictionaries keyed by the header."""
    reader = csv.reader(line for line in lines if line.strip())
    try:
        header = next(reader)
    except StopIteration:
        return []
    rows = []
    for line_no, fields in enumerate(reader, start=2):
        if len(fields) != len(header):
            raise ParseError(
                f'{len(fields)} fields, header has {len(header)}', line_no
            )
        rows.append({
            column: core.parse_number(field)
            for column, field in zip(header, fields)
        })
    return rows


dump_table, dumps_table = core.dumpers(dump_table_lines)
load_table, loads_table = core.loaders(load_table_lines)
