"""CSV interchange for collection runs and raw client records.

A collection file starts with `#` comment lines carrying the mechanism and
budget as JSON, followed by one report per row:

    # mechanism: {"kind": "laplace", "scale": 10.0}
    # budget: {"delta": 0.0, "epsilon": 1.0}
    # n: 3
    z0
    0.41
    ...
"""

import csv
from pathlib import Path

import numpy as np
import orjson

from ldpbayes.mechanisms import PrivacyBudget, mechanism_from_dict
from ldpbayes.protocol.models import ClientRecords, CollectionRun
from ldpbayes.utils.errors import ConfigError


def write_header(f, entries):
    """Comment block of `# key: json` lines."""
    for key, value in entries.items():
        f.write(f"# {key}: {orjson.dumps(value, option=orjson.OPT_SORT_KEYS).decode()}\n")


def read_header(lines, source=None):
    header = {}
    for number, line in enumerate(lines, start=1):
        key, sep, value = line[1:].strip().partition(":")
        if not sep:
            raise ConfigError(f"malformed header line {line.strip()!r}", line=number, source=source)
        try:
            header[key.strip()] = orjson.loads(value.strip())
        except orjson.JSONDecodeError as e:
            raise ConfigError(f"header {key.strip()!r} is not JSON: {e}", line=number, source=source) from e
    return header


def _split_comments(path):
    comments, body = [], []
    with Path(path).open(newline="") as f:
        for line in f:
            (comments if line.startswith("#") and not body else body).append(line)
    return comments, body


def write_run(run, path):
    path = Path(path)
    reports = np.asarray(run.reports, dtype=float)
    reports = reports.reshape(len(reports), -1)
    columns = [f"z{j}" for j in range(reports.shape[1])]
    if run.labels is not None:
        columns.append("label")

    with path.open("w", newline="") as f:
        write_header(
            f,
            {
                "mechanism": run.mechanism.to_dict(),
                "budget": run.budget.to_dict() if run.budget is not None else None,
                "n": run.n,
                "invocations": run.invocations,
            },
        )
        writer = csv.writer(f)
        writer.writerow(columns)
        for i, row in enumerate(reports):
            cells = [repr(float(v)) for v in row]
            if run.labels is not None:
                cells.append(repr(float(run.labels[i])))
            writer.writerow(cells)
    return path


def read_run(path):
    comments, body = _split_comments(path)
    header = read_header(comments, source=str(path))
    for key in ("mechanism", "budget"):
        if key not in header:
            raise ConfigError(f"collection file lacks the {key!r} header", source=str(path))

    rows = list(csv.reader(body))
    if not rows:
        raise ConfigError("collection file has no column header", source=str(path))
    columns, values = rows[0], np.array(rows[1:], dtype=float).reshape(len(rows) - 1, len(rows[0]))
    labels = None
    if columns and columns[-1] == "label":
        labels, values = values[:, -1], values[:, :-1]

    mechanism = mechanism_from_dict(header["mechanism"])
    budget = PrivacyBudget(**header["budget"]) if header["budget"] else None
    if mechanism.kind in ("laplace", "gaussian", "rr", "noiseless") and values.shape[1] == 1:
        values = values[:, 0]
    if mechanism.kind in ("rr", "oue"):
        values = values.astype(np.int8)
    return CollectionRun(mechanism, budget, values, labels, invocations=header.get("invocations", len(values)))


def read_records(path, kind, d=None):
    """Raw records from a plain CSV: `value`, `category`, `bit` or `x0..x{d-1},y` columns."""
    with Path(path).open(newline="") as f:
        reader = csv.DictReader(row for row in f if not row.startswith("#"))
        rows = list(reader)
        fields = reader.fieldnames or []

    def column(name):
        if name not in fields:
            raise ConfigError(f"missing column {name!r}", source=str(path))
        return np.array([float(r[name]) for r in rows])

    if kind == "scalar":
        return ClientRecords("scalar", column("value"))
    if kind == "bit":
        return ClientRecords("bit", column("bit").astype(np.int8))
    if kind == "category":
        categories = column("category").astype(int)
        return ClientRecords("category", categories, d=d or int(categories.max()) + 1)
    features = sorted((f for f in fields if f.startswith("x")), key=lambda f: int(f[1:]))
    if not features:
        raise ConfigError("labeled records need x0..x{d-1} columns", source=str(path))
    x = np.column_stack([column(f) for f in features])
    return ClientRecords("labeled", x, column("y"))
