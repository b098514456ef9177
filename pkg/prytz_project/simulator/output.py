"""
Writers for command output: CSV tables with 17 significant digits and
JSON summaries with sorted keys, so identical runs give identical bytes.
"""
import json
import logging
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

CSV_FORMAT = "%.17g"


def write_csv(path, header, rows):
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    np.savetxt(path, rows, fmt=CSV_FORMAT, delimiter=",", header=header, comments="")
    logger.debug("wrote %s (%d rows)", path, len(rows))


def read_csv(path):
    """Header and rows of a file written by write_csv."""
    with open(path) as handle:
        header = handle.readline().strip()
    return header, np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def write_json(path, data):
    with open(path, "w") as handle:
        json.dump(data, handle, sort_keys=True, indent=2)
        handle.write("\n")
    logger.debug("wrote %s", path)


def write_report(report, out_dir):
    """All tables of `report` plus <command>.json; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in report.tables.items():
        path = out_dir / name
        write_csv(path, header, rows)
        written.append(path)
    path = out_dir / f"{report.command}.json"
    write_json(path, report.summary)
    written.append(path)
    return written
