"""Deterministic CSV writers (UTF-8, comma separated, LF, fixed scientific notation)."""

from pathlib import Path

import numpy as np

__all__ = ["read_matrix", "write_matrix", "write_table"]


def _fmt(precision):
    return f"%.{int(precision)}e"


def write_table(path, header, columns, precision=12):
    """Write equal-length numeric ``columns`` under a one-line ``header``."""
    path = Path(path)
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, data, fmt=_fmt(precision), delimiter=",", newline="\n")
    return path


def write_matrix(path, row_values, col_values, matrix, precision=12, corner="x\\p", stride=1):
    """Write ``matrix`` with a header row of ``col_values`` and a leading column of ``row_values``.

    ``stride`` keeps every ``stride``-th row (thinning the x axis only).
    """
    path = Path(path)
    fmt = _fmt(precision)
    rows = np.asarray(row_values, dtype=float)[::stride]
    body = np.column_stack([rows, np.asarray(matrix, dtype=float)[::stride]])
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(corner + "," + ",".join(fmt % v for v in col_values) + "\n")
        np.savetxt(fh, body, fmt=fmt, delimiter=",", newline="\n")
    return path


def read_matrix(path):
    """Inverse of :func:`write_matrix`: returns ``(row_values, col_values, matrix)``."""
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        body = np.loadtxt(fh, delimiter=",", ndmin=2)
    return body[:, 0], np.array(header[1:], dtype=float), body[:, 1:]
