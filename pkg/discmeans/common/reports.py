"""
Report writers

Serializes result records as CSV rows or a JSON array. Floats are written
with repr() so identical runs produce byte-identical output.
"""
import csv

import click
from flask import json


def flatten(record: dict) -> dict:
    """Expands list values (points) into key_x1, key_x2 columns"""
    flat = {}
    for key, value in record.items():
        if isinstance(value, (list, tuple)):
            flat.update({f"{key}_x{i + 1}": item for i, item in enumerate(value)})
        else:
            flat[key] = value
    return flat


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(records: list, columns: list, stream):
    """Writes one header row and one row per record"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        row = flatten(record)
        writer.writerow([_cell(row.get(column, "")) for column in columns])


def write_json(records: list, stream):
    """Writes the records as one JSON array"""
    stream.write(json.dumps(records, indent=2))
    stream.write("\n")


def write_report(records: list, columns: list, output_format: str, out: str = None):
    """Writes serialized records to out (stdout when None) as csv or json"""
    with click.open_file(out or "-", "w", encoding="utf-8") as stream:
        if output_format == "json":
            write_json(records, stream)
        else:
            write_csv(records, columns, stream)
