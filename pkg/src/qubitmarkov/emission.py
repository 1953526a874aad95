"""CSV output: comma separated, mandatory header, LF endings, 17 significant digits."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np


def format_number(x) -> str:
    return format(float(x), ".17g")


@dataclass
class CsvEmission:
    header: List[str]
    rows: np.ndarray  # (n_records, n_columns)

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if self.rows.shape[1] != len(self.header):
            raise ValueError(f"{self.rows.shape[1]} columns but {len(self.header)} header fields")

    @classmethod
    def from_columns(cls, columns: Sequence[tuple]):
        """Build from ``(name, values)`` pairs of equal length."""
        header = [name for name, _ in columns]
        data = np.column_stack([np.asarray(values, dtype=float) for _, values in columns])
        return cls(header, data)

    def column(self, name):
        return self.rows[:, self.header.index(name)]

    def to_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_number(x) for x in row])
        return buf.getvalue()

    def write(self, path):
        """Write atomically: temp file in the target directory, then rename."""
        path = os.fspath(path)
        directory = os.path.dirname(os.path.abspath(path))
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", suffix=".csv", dir=directory)
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(self.to_text())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def from_text(cls, text: str):
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader if row]
        return cls(header, np.array(rows, dtype=float).reshape(-1, len(header)))

    @classmethod
    def read(cls, path):
        with open(path, newline="") as fh:
            return cls.from_text(fh.read())
