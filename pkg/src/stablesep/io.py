"""File input/output: CSV ingestion, TSV result tables, manifests.

Output files are written with repr() float formatting and newline
terminators fixed to "\\n", so identical runs are byte-identical and
friendly to diff tools. Every run directory gets a MANIFEST.txt with a
config echo and a sha256 content hash per emitted file.
"""

import csv
import hashlib
import math
import os

from .data import ROLE_UNKNOWN, Dataset
from .errors import MissingColumn, ParseError


def load_csv(path, response_column, group_column=None):
    """Read a comma-delimited UTF-8 file with a header row.

    Numeric columns (other than the response and the optional group
    column) become predictors. A column whose every cell fails to parse
    is dropped as non-numeric; a column that parses only partly, or
    contains non-finite values like "NaN", raises ParseError with the
    offending 1-based line number.

    Returns
    -------
    Dataset, or (Dataset, list of group keys) when group_column is set.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "empty file") from None
        header = [h.strip() for h in header]
        rows = [row for row in reader if row]

    if response_column not in header:
        raise MissingColumn(response_column)
    if group_column is not None and group_column not in header:
        raise MissingColumn(group_column)

    cells = {}
    for j, name in enumerate(header):
        col = []
        for i, row in enumerate(rows):
            if len(row) != len(header):
                raise ParseError(i + 2, f"expected {len(header)} fields, got {len(row)}")
            col.append(row[j].strip())
        cells[name] = col

    def parse_column(name, required):
        parsed = []
        first_text = None  # (line, cell) of the first unparseable cell
        for i, text in enumerate(cells[name]):
            try:
                val = float(text)
            except ValueError:
                parsed.append(None)
                if first_text is None:
                    first_text = (i + 2, text)
                continue
            if not math.isfinite(val):
                # non-finite numerics are never acceptable, even in a
                # column we might otherwise drop
                raise ParseError(i + 2, f"column {name!r}: non-finite value {text!r}")
            parsed.append(val)
        n_bad = sum(1 for v in parsed if v is None)
        if n_bad == 0:
            return parsed
        if not required and n_bad == len(parsed):
            return None  # fully non-numeric column: drop it
        line, text = first_text
        raise ParseError(line, f"column {name!r}: cannot parse {text!r}")

    y = parse_column(response_column, required=True)
    names, columns = [], []
    for name in header:
        if name == response_column or name == group_column:
            continue
        col = parse_column(name, required=False)
        if col is not None:
            names.append(name)
            columns.append(col)

    predictors = list(zip(*columns))
    d = Dataset(predictors, y, tuple(names), (ROLE_UNKNOWN,) * len(names))
    if group_column is None:
        return d
    return d, list(cells[group_column])


def format_value(v) -> str:
    """Stable text form for table cells (repr for floats)."""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_tsv(path, header, rows):
    """Write a tab-separated table with a single header row."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for row in rows:
            fh.write("\t".join(format_value(v) for v in row) + "\n")


def export_dataset_csv(path, d: Dataset):
    """Write a dataset as CSV; roles go into a leading comment line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if d.roles is not None:
            fh.write("# roles: " + ",".join(d.roles) + "\n")
        fh.write(",".join(d.names) + ",response\n")
        for i in range(d.n):
            vals = [repr(float(v)) for v in d.predictors[i]]
            vals.append(repr(float(d.response[i])))
            fh.write(",".join(vals) + "\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir, config_echo, files, note=None):
    """Record the run configuration and a content hash per output file."""
    path = os.path.join(out_dir, "MANIFEST.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("[config]\n")
        for key in sorted(config_echo):
            fh.write(f"{key} = {config_echo[key]}\n")
        if note:
            fh.write(f"\n[note]\n{note}\n")
        fh.write("\n[files]\n")
        for name in sorted(files):
            fh.write(f"{name} sha256={sha256_file(os.path.join(out_dir, name))}\n")
    return path
