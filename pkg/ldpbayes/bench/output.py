"""Result tables: CSV with a `#` header block holding the resolved config."""

import csv
import logging
from pathlib import Path

import orjson

logger = logging.getLogger(__name__)


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def sort_rows(rows, columns):
    """Deterministic row order regardless of the order repeats finished in."""
    return sorted(rows, key=lambda row: tuple(row[c] for c in columns))


def write_table(path, columns, rows, header=None, sort_by=None):
    """Write rows (dicts) under `columns`; `header` entries become `# key: json` lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if sort_by:
        rows = sort_rows(rows, sort_by)
    with path.open("w", newline="") as f:
        for key, value in (header or {}).items():
            encoded = orjson.dumps(value, option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY)
            f.write(f"# {key}: {encoded.decode()}\n")
        writer = csv.writer(f, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
    logger.info("Wrote %d rows to %s", len(rows), path)
    return path


def read_table(path):
    """(header dict, rows) from a file written by `write_table`."""
    header, lines = {}, []
    with Path(path).open(newline="") as f:
        for line in f:
            if line.startswith("#") and not lines:
                key, _, value = line[1:].strip().partition(":")
                header[key.strip()] = orjson.loads(value.strip())
            else:
                lines.append(line)
    return header, list(csv.DictReader(lines))


def write_result(result, config, out_dir=None):
    """`<name>.csv` (and `<name>.svg` when plotting) with the resolved config in the header."""
    from ldpbayes.bench.plots import line_chart

    out_dir = Path(out_dir or config.output_dir)
    header = {
        "config": config.to_dict(),
        "budget": [config.budget(eps).to_dict() for eps in config.epsilons],
        "max_rhat": result.max_rhat,
        "rejection_rate": result.rejection_rate,
    }
    paths = [write_table(out_dir / f"{result.name}.csv", result.columns, result.rows, header, result.columns)]
    parameter_rows = getattr(result, "parameter_rows", None)
    if parameter_rows:
        columns = ("epsilon", "parameter", "mass", "coverage", "repeats")
        paths.append(write_table(out_dir / f"{result.name}_parameters.csv", columns, parameter_rows, header, columns))
    if config.plot and result.chart:
        chart = result.chart
        paths.append(
            line_chart(
                out_dir / f"{result.name}.svg",
                result.rows,
                chart["x"],
                chart["y"],
                chart["group"],
                title=result.name,
                reference=chart.get("reference"),
            )
        )
    return paths
